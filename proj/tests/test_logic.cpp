#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <random>

#include "eldec/coding.hpp"
#include "eldec/formula.hpp"
#include "eldec/parse.hpp"
#include "eldec/transform.hpp"

using namespace eldec;

namespace {

Signature binary_r() { return Signature({{"R", 2}}); }
Signature succ_graph() { return Signature({{"S", 2}, {"Zero", 1}}); }

// Independent enumeration of the block scheme: walk blocks 0,1,2,… and list
// equality atoms then relation tuples (filtering a plain lexicographic sweep
// on max entry). Used as the oracle against encode/decode.
std::vector<FormulaPtr> enumerate_atoms(const Signature& sig, size_t count) {
  std::vector<FormulaPtr> out;
  for (uint64_t n = 0; out.size() < count; ++n) {
    for (uint64_t i = 0; i < n && out.size() < count; ++i)
      out.push_back(mk_eq(Term::dom_const(i), Term::dom_const(n)));
    for (const auto& r : sig.relations()) {
      std::vector<uint64_t> t(r.arity, 0);
      while (true) {
        if (*std::max_element(t.begin(), t.end()) == n && out.size() < count) {
          std::vector<Term> args;
          for (auto v : t) args.push_back(Term::dom_const(v));
          out.push_back(mk_atom(r.name, std::move(args)));
        }
        // lexicographic increment over {0..n}^arity
        size_t i = t.size();
        while (i > 0 && t[i - 1] == n) t[--i] = 0;
        if (i == 0) break;
        ++t[i - 1];
      }
      if (out.size() >= count) break;
    }
  }
  return out;
}

// Finite-model evaluator: the second opinion for the semantic properties.
struct FiniteModel {
  int size = 0;
  std::map<std::string, std::set<std::vector<int>>> rels;
  std::map<std::string, int> consts;
  std::map<std::string, std::vector<int>> funcs;  // unary tables

  int eval_term(const Term& t, const std::map<std::string, int>& env) const {
    switch (t.kind) {
      case Term::Kind::Var:
        return env.at(t.name);
      case Term::Kind::DomConst:
        return static_cast<int>(t.index) % size;
      case Term::Kind::NamedConst:
        return consts.at(t.name);
      case Term::Kind::App: {
        int a = eval_term(t.args.at(0), env);
        return funcs.at(t.name).at(a);
      }
    }
    return 0;
  }

  bool eval(const FormulaPtr& f, std::map<std::string, int> env) const {
    switch (f->kind) {
      case Formula::Kind::True:
        return true;
      case Formula::Kind::False:
        return false;
      case Formula::Kind::Eq:
        return eval_term(f->terms[0], env) == eval_term(f->terms[1], env);
      case Formula::Kind::Atom: {
        std::vector<int> args;
        for (const auto& t : f->terms) args.push_back(eval_term(t, env));
        auto it = rels.find(f->sym);
        return it != rels.end() && it->second.count(args);
      }
      case Formula::Kind::Not:
        return !eval(f->lhs, env);
      case Formula::Kind::And:
        return eval(f->lhs, env) && eval(f->rhs, env);
      case Formula::Kind::Or:
        return eval(f->lhs, env) || eval(f->rhs, env);
      case Formula::Kind::Implies:
        return !eval(f->lhs, env) || eval(f->rhs, env);
      case Formula::Kind::Forall:
        for (int v = 0; v < size; ++v) {
          env[f->sym] = v;
          if (!eval(f->lhs, env)) return false;
        }
        return true;
      case Formula::Kind::Exists:
        for (int v = 0; v < size; ++v) {
          env[f->sym] = v;
          if (eval(f->lhs, env)) return true;
        }
        return false;
    }
    return false;
  }
};

FiniteModel random_model(std::mt19937& rng, int size) {
  FiniteModel m;
  m.size = size;
  std::bernoulli_distribution coin(0.5);
  for (int a = 0; a < size; ++a)
    for (int b = 0; b < size; ++b)
      if (coin(rng)) m.rels["R"].insert({a, b});
  return m;
}

}  // namespace

TEST_CASE("term and formula printing round-trips through the parser") {
  Signature sig({{"S", 2}, {"<", 2}}, {{"S", 1}, {"lo", 0}, {"hi", 0}});
  std::vector<std::string> inputs = {
      "forall x. ~S(x) = #0",
      "exists x. (lo < x & x < hi)",
      "exists x. S(x) = #1",
      "forall x. forall y. S(x,y) -> ~x = y",
      "R(#0,#0) | true",
      "~(x = y | x < y) & false",
  };
  Signature sig_r({{"S", 2}, {"<", 2}, {"R", 2}}, {{"S", 1}, {"lo", 0}, {"hi", 0}});
  for (const auto& s : inputs) {
    FormulaPtr f = parse_formula(sig_r, s);
    FormulaPtr g = parse_formula(sig_r, to_string(f));
    CHECK_MESSAGE(equal(f, g), s, " vs ", to_string(f));
  }
}

TEST_CASE("parser structure and precedence") {
  Signature sig({{"R", 2}}, {{"S", 1}, {"zero", 0}});
  auto f = parse_formula(sig, "~R(x,y) & R(y,x) | R(x,x) -> R(y,y)");
  REQUIRE(f->kind == Formula::Kind::Implies);
  CHECK(f->lhs->kind == Formula::Kind::Or);
  CHECK(f->lhs->lhs->kind == Formula::Kind::And);
  CHECK(f->lhs->lhs->lhs->kind == Formula::Kind::Not);

  auto g = parse_formula(sig, "exists x. R(x,x) & R(x,y)");
  CHECK(g->kind == Formula::Kind::Exists);  // body extends maximally right
  CHECK(g->lhs->kind == Formula::Kind::And);

  // S(t) is a function term, S(t,u) would need a binary relation S.
  Signature both({{"S", 2}}, {{"S", 1}});
  auto h = parse_formula(both, "S(x) = y & S(x,y)");
  CHECK(h->lhs->kind == Formula::Kind::Eq);
  CHECK(h->lhs->terms[0].kind == Term::Kind::App);
  CHECK(h->rhs->kind == Formula::Kind::Atom);

  auto k = parse_formula(both, "exists q. S(q) = #0");
  CHECK(k->lhs->terms[0].args[0] == Term::var("q"));

  CHECK_THROWS_AS(parse_formula(sig, "exists x"), FormulaError);
  CHECK_THROWS_AS(parse_formula(sig, "R(x,y) R(y,x)"), FormulaError);
  CHECK_THROWS_AS(parse_formula(sig, "R(x)"), FormulaError);
  CHECK_THROWS_AS(parse_formula(sig, "S(x)"), FormulaError);
}

TEST_CASE("free variables and substitution") {
  Signature sig({{"R", 2}}, {});
  auto f = parse_formula(sig, "exists y. R(x,y) & R(y,z)");
  CHECK(free_vars(f) == std::set<std::string>{"x", "z"});

  // Capture avoidance: substituting y for x must rename the bound y.
  auto g = substitute(f, {{"x", Term::var("y")}});
  CHECK(free_vars(g) == std::set<std::string>{"y", "z"});
  CHECK(g->sym != "y");

  auto h = substitute_dom_consts(parse_formula(sig, "R(#3,#5)"),
                                 {{3, Term::var("u")}});
  CHECK(equal(h, parse_formula(sig, "R(u,#5)")));
}

TEST_CASE("block lengths for the reference signatures") {
  auto r = binary_r();
  CHECK(block_length(r, 0) == 1);
  CHECK(block_length(r, 1) == 5);
  CHECK(block_length(r, 2) == 12);

  auto s = succ_graph();
  CHECK(block_length(s, 0) == 2);
  CHECK(block_length(s, 1) == 7);
  CHECK(block_length(s, 2) == 15);
}

TEST_CASE("atomic codes match the independent block enumeration") {
  for (const auto& sig : {binary_r(), succ_graph(),
                          Signature({{"<", 2}, {"IsLo", 1}, {"IsHi", 1}}),
                          Signature({{"<", 2}, {"Adj", 2}})}) {
    auto atoms = enumerate_atoms(sig, 400);
    for (uint64_t c = 0; c < atoms.size(); ++c) {
      CHECK(encode_atomic(sig, atoms[c]) == c);
      CHECK(equal(decode_atomic(sig, c), atoms[c]));
    }
  }
}

TEST_CASE("first codes of the binary-R scheme") {
  auto sig = binary_r();
  CHECK(to_string(decode_atomic(sig, 0)) == "R(#0,#0)");
  CHECK(to_string(decode_atomic(sig, 1)) == "#0 = #1");
  CHECK(to_string(decode_atomic(sig, block_length(sig, 1) - 1)) == "R(#1,#1)");
}

TEST_CASE("coding round-trips on a 10^4 prefix and is block-monotone") {
  auto sig = succ_graph();
  uint64_t prev_block = 0;
  for (uint64_t c = 0; c < 10000; ++c) {
    auto a = decode_atomic(sig, c);
    CHECK(encode_atomic(sig, a) == c);
    uint64_t blk = code_block(sig, c);
    CHECK(blk >= prev_block);
    uint64_t maxc = 0;
    for (auto i : dom_consts(a)) maxc = std::max(maxc, i);
    CHECK(maxc == blk);
    prev_block = blk;
  }
  CHECK_THROWS_AS(encode_atomic(sig, mk_eq(Term::dom_const(2), Term::dom_const(2))),
                  FormulaError);
  CHECK_THROWS_AS(encode_atomic(sig, parse_formula(sig, "forall x. S(x,x)")),
                  FormulaError);
}

TEST_CASE("equality-case expansion counts and the three-variable display") {
  Signature sig({{"R", 2}}, {});
  auto alpha = parse_formula(sig, "R(x0,x1)");
  CHECK(expand_equality_cases(alpha, {"x0"}).size() == 1);
  CHECK(expand_equality_cases(alpha, {"x0", "x1"}).size() == 2);
  auto cases3 = expand_equality_cases(alpha, {"x0", "x1", "x2"});
  REQUIRE(cases3.size() == 5);
  CHECK(cases3[0].pattern == std::vector<unsigned>{0, 0, 0});
  CHECK(cases3[1].pattern == std::vector<unsigned>{0, 1, 1});
  CHECK(cases3[2].pattern == std::vector<unsigned>{0, 1, 0});
  CHECK(cases3[3].pattern == std::vector<unsigned>{0, 0, 1});
  CHECK(cases3[4].pattern == std::vector<unsigned>{0, 1, 2});
  CHECK(expand_equality_cases(alpha, {"x0", "x1", "x2", "x3"}).size() == 15);

  // single case with one variable leaves alpha untouched
  auto one = expand_equality_cases(parse_formula(sig, "R(x0,x0)"), {"x0"});
  CHECK(equal(one[0].guarded, parse_formula(sig, "R(x0,x0)")));
}

TEST_CASE("equality-case disjunction is semantically faithful") {
  std::mt19937 rng(7);
  Signature sig({{"R", 2}}, {});
  std::vector<FormulaPtr> alphas = {
      parse_formula(sig, "R(x0,x1) & R(x1,x2)"),
      parse_formula(sig, "R(x0,x2) | ~R(x1,x1)"),
      parse_formula(sig, "exists y. R(x0,y) & R(y,x1) & ~y = x2"),
  };
  for (int trial = 0; trial < 8; ++trial) {
    FiniteModel m = random_model(rng, 4);
    for (const auto& alpha : alphas) {
      auto cases = expand_equality_cases(alpha, {"x0", "x1", "x2"});
      std::vector<FormulaPtr> parts;
      for (const auto& c : cases) parts.push_back(c.guarded);
      FormulaPtr disj = mk_or_all(parts);
      for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b)
          for (int c = 0; c < 4; ++c) {
            std::map<std::string, int> env{{"x0", a}, {"x1", b}, {"x2", c}};
            CHECK(m.eval(alpha, env) == m.eval(disj, env));
          }
    }
  }
}

TEST_CASE("prenex form: shape and truth preservation on small models") {
  Signature sig({{"R", 2}}, {});
  auto already = parse_formula(sig, "forall x. R(x,x)");
  CHECK(equal(to_prenex(already), already));

  std::mt19937 rng(11);
  std::vector<FormulaPtr> fs = {
      parse_formula(sig, "(exists x. R(x,y)) -> (forall x. R(y,x))"),
      parse_formula(sig, "~(exists x. forall y. R(x,y) | ~R(y,x))"),
      parse_formula(sig, "(forall x. R(x,x)) & (exists x. ~R(x,x))"),
      parse_formula(sig, "exists x. R(x,x) -> forall x. R(x,x)"),
  };
  for (const auto& f : fs) {
    auto p = to_prenex(f);
    auto [prefix, matrix] = split_prenex(p);
    CHECK(is_quantifier_free(matrix));
    for (int size = 1; size <= 4; ++size)
      for (int trial = 0; trial < 6; ++trial) {
        FiniteModel m = random_model(rng, size);
        for (int y = 0; y < size; ++y) {
          std::map<std::string, int> env{{"y", y}};
          CHECK(m.eval(f, env) == m.eval(p, env));
        }
      }
  }
}

TEST_CASE("nnf and simplify") {
  Signature sig({{"R", 2}}, {});
  auto f = nnf(parse_formula(sig, "~(R(x,y) -> exists z. R(y,z))"));
  // ¬(a → ∃z b)  becomes  a ∧ ∀z ¬b
  CHECK(f->kind == Formula::Kind::And);
  CHECK(f->rhs->kind == Formula::Kind::Forall);
  CHECK(f->rhs->lhs->kind == Formula::Kind::Not);

  CHECK(simplify(parse_formula(sig, "R(x,y) & true"))->kind ==
        Formula::Kind::Atom);
  CHECK(simplify(parse_formula(sig, "R(x,y) & false"))->kind ==
        Formula::Kind::False);
  CHECK(simplify(parse_formula(sig, "~~R(x,y)"))->kind == Formula::Kind::Atom);
  CHECK(simplify(parse_formula(sig, "x = x"))->kind == Formula::Kind::True);
  CHECK(simplify(parse_formula(sig, "forall q. R(x,y)"))->kind ==
        Formula::Kind::Atom);
  CHECK(simplify(parse_formula(sig, "R(x,y) | R(x,y) | R(y,x)"))->kind ==
        Formula::Kind::Or);
}
