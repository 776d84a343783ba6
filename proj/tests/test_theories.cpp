#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "eldec/parse.hpp"
#include "eldec/theories.hpp"

using namespace eldec;

namespace {

FormulaPtr parse_in(const std::string& theory_id, const std::string& text) {
  return parse_formula(theory(theory_id).surface_sig, text);
}

// Battery of rank <= 3 formulas per model-complete theory, written in the
// theory's surface syntax with free variables x, y.
const std::vector<std::string> kSucc0Battery = {
    "exists y. S(y) = x",
    "exists y. (S(y) = x & Zero(y))",
    "forall y. (S(x,y) -> exists z. S(y,z))",
    "exists y. exists z. (S(x,y) & S(y,z) & z = S(S(zero)))",
    "forall y. ~(x = S(y))",
    "exists z. (S(x,z) & S(y,z))",
    "exists z. (x = S(z) & y = S(z))",
    "forall z. (Zero(z) -> exists w. (S(z,w) & w = x))",
    "exists w. (x = S(w) & exists v. w = S(v))",
};

const std::vector<std::string> kDloBattery = {
    "exists z. (x < z & z < y)",
    "forall z. (lo < z | z = lo)",
    "exists z. z < x",
    "forall z. (z < x | z = x)",
    "exists z. (x < z & z < hi)",
    "IsLo(x) | exists z. z < x",
    "forall z. exists w. (z < w | w < z)",
    "exists z. (z < x & exists w. (z < w & w < x))",
};

const std::vector<std::string> kAdjBattery = {
    "exists z. (x < z & z < y)",
    "exists y. Adj(x,y)",
    "exists y. Adj(y,x)",
    "forall z. ~(x < z & z < y)",
    "exists z. exists w.ize(x,z,w)",  // placeholder replaced below
    "exists y. (Adj(x,y) & exists z. Adj(y,z))",
    "exists z. (Adj(x,z) & z < y)",
    "forall y. (Adj(x,y) -> x < y)",
};

}  // namespace

TEST_CASE("registry lists exactly the four theories") {
  const auto& reg = registry();
  REQUIRE(reg.size() == 4);
  std::vector<std::string> ids;
  for (const auto& t : reg) ids.push_back(t.id);
  CHECK(ids == std::vector<std::string>{"succ0", "succ", "dlo++", "adj"});
  CHECK(theory("succ0").model_complete);
  CHECK(theory("dlo++").model_complete);
  CHECK(theory("adj").model_complete);
  CHECK_FALSE(theory("succ").model_complete);
  CHECK(theory("succ").qe_pair == nullptr);
  CHECK_THROWS_AS(theory("peano"), FormulaError);
  // surface parses its canonical example sentences
  CHECK_NOTHROW(parse_in("succ0", "exists y. S(y) = x"));
  CHECK_NOTHROW(parse_in("dlo++", "lo < hi"));
  CHECK_NOTHROW(parse_in("adj", "exists y. Adj(x,y)"));
}

TEST_CASE("classical truth on built-in structures: hand-checked sentences") {
  Presentation succ0 = make_builtin("succ0");
  auto T = [&](const Presentation& p, const std::string& th,
               const std::string& s) {
    return classical_truth(p, parse_in(th, s));
  };

  CHECK(T(succ0, "succ0", "exists x. Zero(x)"));
  CHECK(T(succ0, "succ0", "forall x. exists y. S(x,y)"));
  CHECK(T(succ0, "succ0", "exists x. forall y. ~S(y,x)"));
  CHECK_FALSE(T(succ0, "succ0", "exists y. S(y) = zero"));
  CHECK(T(succ0, "succ0", "exists y. S(zero) = y"));
  CHECK(T(succ0, "succ0", "forall x. (Zero(x) | exists y. x = S(y))"));
  CHECK_FALSE(T(succ0, "succ0", "exists x. S(x,x)"));
  // #3 stands for the natural number 3 under the identity enumeration
  CHECK(T(succ0, "succ0", "#3 = S(S(S(zero)))"));
  CHECK_FALSE(T(succ0, "succ0", "#3 = S(S(zero))"));

  // shifted successor lines are isomorphic copies
  for (const char* spec : {"succ", "succ:shift=1", "succ:shift=4"}) {
    Presentation p = make_builtin(spec);
    CHECK(T(p, "succ", "exists x. forall y. ~S(y,x)"));
    CHECK(T(p, "succ", "forall x. exists y. S(x,y)"));
    CHECK_FALSE(T(p, "succ", "exists x. exists y. (S(x,y) & S(y,x))"));
  }

  const std::string density =
      "forall x. forall y. (x < y -> exists z. (x < z & z < y))";
  Presentation dlo01 = make_builtin("dlo01");
  CHECK(T(dlo01, "dlo++", density));
  CHECK(T(dlo01, "dlo++", "lo < hi"));
  CHECK(T(dlo01, "dlo++", "forall x. (IsLo(x) | lo < x)"));
  CHECK_FALSE(T(dlo01, "dlo++", "exists x. x < lo"));
  CHECK_FALSE(T(dlo01, "dlo++", "exists x. hi < x"));
  CHECK(T(dlo01, "dlo++", "exists x. (lo < x & x < hi)"));

  // interval unions are not dense across the gaps (no named constants, so
  // evaluate the raw order sentence)
  Signature ord({{"<", 2}});
  Presentation a1 = make_builtin("a_n:n=1");
  CHECK_FALSE(classical_truth(a1, parse_formula(ord, density)));
  CHECK(classical_truth(
      a1, parse_formula(ord, "forall x. exists y. (x < y | y < x)")));

  Presentation sh = make_builtin("shuffle+adj");
  CHECK_FALSE(T(sh, "adj", density));
  CHECK(T(sh, "adj",
          "forall x. forall y. ((x < y & ~Adj(x,y)) -> "
          "exists z. (x < z & z < y))"));
  CHECK(T(sh, "adj", "forall x. (exists y. Adj(x,y) | exists y. Adj(y,x))"));
  CHECK_FALSE(T(sh, "adj", "exists x. (exists y. Adj(x,y) & exists y. Adj(y,x))"));
  CHECK(T(sh, "adj",
          "forall x. forall y. forall z. ((Adj(x,y) & Adj(x,z)) -> y = z)"));
  CHECK(T(sh, "adj", "forall x. exists y. (x < y & ~Adj(x,y))"));
}

TEST_CASE("classical truth is isomorphism invariant across pullbacks") {
  // constant-free sentences cannot tell a copy from the original
  struct Probe {
    const char* spec;
    const char* th;
    const char* sentence;
  };
  const std::vector<Probe> probes = {
      {"succ0", "succ0", "exists x. (Zero(x) & exists y. S(x,y))"},
      {"succ0", "succ0", "exists y. S(y) = zero"},
      {"dlo01", "dlo++", "forall x. forall y. "
                         "(x < y -> exists z. (x < z & z < y))"},
      {"dlo01", "dlo++", "exists x. (lo < x & x < hi)"},
      {"shuffle+adj", "adj", "forall x. exists y. (x < y & ~Adj(x,y))"},
      {"shuffle+adj", "adj", "exists x. exists y. Adj(x,y)"},
  };
  for (const auto& pr : probes) {
    Presentation base = make_builtin(pr.spec);
    FormulaPtr s = parse_in(pr.th, pr.sentence);
    bool expect = classical_truth(base, s);
    for (const auto& g : {Permutation::swap_pair(0, 7),
                          Permutation::fin_supp({{0, 3}, {3, 5}, {5, 0}}),
                          Permutation::swap_pair(1, 2)}) {
      CAPTURE(pr.sentence);
      CHECK(classical_truth(pullback(base, g), s) == expect);
    }
  }

  // sentences with domain constants transport along the permutation: the
  // copy's #i plays the base's #g(i)
  Presentation dlo = make_builtin("dlo01");
  Permutation g = Permutation::swap_pair(0, 7);
  FormulaPtr islo0 = parse_in("dlo++", "IsLo(#0)");
  FormulaPtr islo7 = parse_in("dlo++", "IsLo(#7)");
  CHECK(classical_truth(dlo, islo0));
  CHECK_FALSE(classical_truth(pullback(dlo, g), islo0));
  CHECK(classical_truth(pullback(dlo, g), islo7));
}

TEST_CASE("universal pairs verify against classical truth") {
  auto battery = [](const std::string& id) {
    if (id == "succ0") return kSucc0Battery;
    if (id == "dlo++") return kDloBattery;
    std::vector<std::string> adj = kAdjBattery;
    adj[4] = "exists z. exists w. (x < z & z < w & w < y)";
    return adj;
  };
  for (const std::string id : {"succ0", "dlo++", "adj"}) {
    const auto& t = theory(id);
    uint64_t seed = 11;
    for (const auto& text : battery(id)) {
      CAPTURE(id);
      CAPTURE(text);
      FormulaPtr phi = parse_in(id, text);
      QEPair pair = qe_universal_pair(t, phi);
      CHECK(is_quantifier_free(pair.alpha));
      CHECK(is_quantifier_free(pair.beta));
      QEReport rep = verify_qe(t, phi, 40, seed++);
      CHECK(rep.samples >= 1);
      if (rep.mismatches) {
        for (const auto& d : rep.details) MESSAGE(d);
      }
      CHECK(rep.mismatches == 0);
    }
  }
}

TEST_CASE("full elimination produces quantifier-free equivalents") {
  FormulaPtr phi = parse_in("succ0", "exists y. S(y) = x");
  FormulaPtr qf = qe_succ_full(phi);
  CHECK(is_quantifier_free(qf));
  // x has a predecessor iff x is not zero: spot-check the equivalence
  Presentation p = make_builtin("succ0");
  for (uint64_t i = 0; i < 6; ++i) {
    std::vector<std::pair<std::string, Term>> asg{{"x", Term::dom_const(i)}};
    CHECK(classical_truth(p, substitute(phi, asg)) == (i != 0));
    CHECK(classical_truth(p, substitute(qf, asg)) == (i != 0));
  }

  FormulaPtr dens = parse_in("dlo++", "exists z. (x < z & z < y)");
  CHECK(is_quantifier_free(qe_dlo_full(dens)));

  FormulaPtr half = parse_in("adj", "exists y. Adj(x,y)");
  FormulaPtr halfqf = qe_adj_full(half);
  CHECK(is_quantifier_free(halfqf));
  // the eliminator may answer in terms of the left-half helper; the pair
  // transform must re-expand it into Adj-only universal matrices
  QEPair pair = qe_universal_pair(theory("adj"), half);
  for (const FormulaPtr& m : {pair.alpha, pair.beta}) {
    CHECK(is_quantifier_free(m));
    std::set<std::string> rels;
    std::function<void(const FormulaPtr&)> scan = [&](const FormulaPtr& f) {
      if (f->kind == Formula::Kind::Atom) rels.insert(f->sym);
      if (f->lhs) scan(f->lhs);
      if (f->rhs) scan(f->rhs);
    };
    scan(m);
    CHECK(rels.count("Lh") == 0);
  }
  CHECK(!pair.yvars.empty());
}

TEST_CASE("corrupted matrices are caught by the verifier") {
  const auto& t = theory("succ0");
  FormulaPtr phi = parse_in("succ0", "exists y. S(y) = x");
  QEPair good = qe_universal_pair(t, phi);
  QEPair swapped{good.beta, good.alpha, good.yvars};
  QEReport rep = verify_qe_pair(t, phi, swapped, 40, 5);
  CHECK(rep.mismatches > 0);

  QEPair constant{mk_true(), mk_false(), {}};
  QEReport rep2 = verify_qe_pair(t, phi, constant, 40, 5);
  CHECK(rep2.mismatches > 0);
}

TEST_CASE("the successor-only theory refuses the pair transform") {
  const auto& t = theory("succ");
  FormulaPtr phi = parse_formula(t.surface_sig, "exists y. S(y) = x");
  CHECK_THROWS_AS(qe_universal_pair(t, phi), FormulaError);
  CHECK(t.full_qe == nullptr);
}
