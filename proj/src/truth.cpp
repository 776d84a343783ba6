#include <algorithm>
#include <map>

#include "eldec/theories.hpp"

// Direct model-theoretic truth in the built-in structures, independent of
// any quantifier-elimination machinery. Quantifiers over infinite domains
// are reduced to finite candidate sets:
//  - successor lines: locality — a formula of quantifier rank d with
//    maximal S-nesting T only sees radius-(T+1)*3^(d+1) windows around its
//    parameters plus one representative far point;
//  - dense orders (with marks / adjacency): the truth of a literal about a
//    witness depends only on its position relative to the closure of the
//    parameters (partners included), so one candidate per equality class,
//    per gap, and per unbounded end suffices.

namespace eldec {

namespace {

// ---------------------------------------------------------------- successor

struct SuccEval {
  const SuccessorLineFamily* fam;
  const Permutation* f;
  uint64_t radius;

  uint64_t term_value(const Term& t,
                      const std::map<std::string, uint64_t>& env) const {
    switch (t.kind) {
      case Term::Kind::Var: {
        auto it = env.find(t.name);
        if (it == env.end()) throw FormulaError("unbound variable " + t.name);
        return it->second;
      }
      case Term::Kind::DomConst:
        return fam->natural(f->apply(t.index));
      case Term::Kind::NamedConst:
        if (t.name == "zero") return 0;
        throw FormulaError("unknown constant " + t.name);
      case Term::Kind::App:
        if (t.name == "S" && t.args.size() == 1)
          return term_value(t.args[0], env) + 1;
        throw FormulaError("unknown function " + t.name);
    }
    throw FormulaError("bad term");
  }

  bool eval(const FormulaPtr& ff,
            const std::map<std::string, uint64_t>& env) const {
    switch (ff->kind) {
      case Formula::Kind::True:
        return true;
      case Formula::Kind::False:
        return false;
      case Formula::Kind::Eq:
        return term_value(ff->terms[0], env) == term_value(ff->terms[1], env);
      case Formula::Kind::Atom: {
        if (ff->sym == "S")
          return term_value(ff->terms[1], env) ==
                 term_value(ff->terms[0], env) + 1;
        if (ff->sym == "Zero")
          return term_value(ff->terms[0], env) == 0;
        throw FormulaError("unknown relation " + ff->sym);
      }
      case Formula::Kind::Not:
        return !eval(ff->lhs, env);
      case Formula::Kind::And:
        return eval(ff->lhs, env) && eval(ff->rhs, env);
      case Formula::Kind::Or:
        return eval(ff->lhs, env) || eval(ff->rhs, env);
      case Formula::Kind::Implies:
        return !eval(ff->lhs, env) || eval(ff->rhs, env);
      case Formula::Kind::Forall:
      case Formula::Kind::Exists: {
        bool ex = ff->kind == Formula::Kind::Exists;
        uint64_t min = fam->shift();
        std::vector<uint64_t> centers{min};
        for (const auto& [k, v] : env) centers.push_back(v);
        for (uint64_t c : dom_consts(ff))
          centers.push_back(fam->natural(f->apply(c)));
        unsigned d = std::min(quantifier_rank(ff->lhs), 40u);
        uint64_t reach = radius << (d + 2);
        uint64_t hi = *std::max_element(centers.begin(), centers.end());
        std::set<uint64_t> cand{hi + 2 * reach + 2};
        for (uint64_t c : centers)
          for (uint64_t v = c > reach ? c - reach : min; v <= c + reach; ++v)
            if (v >= min) cand.insert(v);
        auto sub = env;
        for (uint64_t v : cand) {
          sub[ff->sym] = v;
          if (eval(ff->lhs, sub) == ex) return ex;
        }
        return !ex;
      }
    }
    throw FormulaError("bad formula kind");
  }
};

unsigned max_s_nesting(const Term& t) {
  unsigned m = 0;
  for (const auto& a : t.args) m = std::max(m, max_s_nesting(a));
  return m + (t.kind == Term::Kind::App ? 1 : 0);
}

unsigned max_s_nesting(const FormulaPtr& f) {
  unsigned m = 0;
  for (const auto& t : f->terms) m = std::max(m, max_s_nesting(t));
  if (f->lhs) m = std::max(m, max_s_nesting(f->lhs));
  if (f->rhs) m = std::max(m, max_s_nesting(f->rhs));
  return m;
}

// -------------------------------------------------------------- dense orders

// Element of a dense built-in structure; half distinguishes the two copies
// of a rational in the shuffle and is 0 elsewhere.
struct DE {
  Rational q;
  int half = 0;

  bool operator<(const DE& o) const {
    if (q < o.q) return true;
    if (o.q < q) return false;
    return half < o.half;
  }
  bool operator==(const DE& o) const { return q == o.q && half == o.half; }
};

struct DenseEval {
  enum class Kind { Dlo01, IntervalUnion, Shuffle };

  Kind kind;
  const Family* fam;
  const Permutation* f;
  unsigned n = 0;          // IntervalUnion
  bool with_adj = false;   // Shuffle

  DE element(uint64_t abstract_idx) const {
    switch (kind) {
      case Kind::Dlo01:
        return {static_cast<const Dlo01Family*>(fam)->value(abstract_idx), 0};
      case Kind::IntervalUnion:
        return {static_cast<const IntervalUnionFamily*>(fam)->value(abstract_idx),
                0};
      case Kind::Shuffle: {
        auto [q, h] = static_cast<const ShuffleFamily*>(fam)->value(abstract_idx);
        return {q, h};
      }
    }
    throw FormulaError("bad family kind");
  }

  DE term_value(const Term& t, const std::map<std::string, DE>& env) const {
    switch (t.kind) {
      case Term::Kind::Var: {
        auto it = env.find(t.name);
        if (it == env.end()) throw FormulaError("unbound variable " + t.name);
        return it->second;
      }
      case Term::Kind::DomConst:
        return element(f->apply(t.index));
      case Term::Kind::NamedConst:
        if (kind == Kind::Dlo01) {
          if (t.name == "lo") return {Rational(0), 0};
          if (t.name == "hi") return {Rational(1), 0};
        }
        throw FormulaError("unknown constant " + t.name);
      case Term::Kind::App:
        throw FormulaError("unknown function " + t.name);
    }
    throw FormulaError("bad term");
  }

  bool in_universe(const DE& e) const {
    switch (kind) {
      case Kind::Dlo01:
        return !(e.q < Rational(0)) && !(Rational(1) < e.q);
      case Kind::IntervalUnion:
        for (unsigned i = 0; i <= n; ++i)
          if (!(e.q < Rational(2 * (int64_t)i)) &&
              !(Rational(2 * (int64_t)i + 1) < e.q))
            return true;
        return false;
      case Kind::Shuffle:
        return true;
    }
    return false;
  }

  bool same_interval(const DE& a, const DE& b) const {
    for (unsigned i = 0; i <= n; ++i)
      if (!(a.q < Rational(2 * (int64_t)i)) &&
          !(Rational(2 * (int64_t)i + 1) < b.q))
        return true;
    return false;
  }

  bool atom(const std::string& rel, const std::vector<DE>& a) const {
    if (rel == "<") return a[0] < a[1];
    if (rel == "IsLo" && kind == Kind::Dlo01) return a[0] == DE{Rational(0), 0};
    if (rel == "IsHi" && kind == Kind::Dlo01) return a[0] == DE{Rational(1), 0};
    if (kind == Kind::IntervalUnion && rel.size() > 1 && rel[0] == 'E') {
      int64_t k = std::stoll(rel.substr(1));
      return a[0] == DE{Rational(k), 0};
    }
    if (rel == "Adj" && kind == Kind::Shuffle && with_adj)
      return a[0].q == a[1].q && a[0].half == 0 && a[1].half == 1;
    if (rel == "Lh" && kind == Kind::Shuffle && with_adj) return a[0].half == 0;
    throw FormulaError("unknown relation " + rel);
  }

  std::vector<DE> candidates(const std::map<std::string, DE>& env,
                             const std::set<uint64_t>& consts) const {
    std::vector<DE> base;
    for (const auto& [k, v] : env) base.push_back(v);
    for (uint64_t c : consts) base.push_back(element(f->apply(c)));
    switch (kind) {
      case Kind::Dlo01:
        base.push_back({Rational(0), 0});
        base.push_back({Rational(1), 0});
        break;
      case Kind::IntervalUnion:
        for (unsigned k = 0; k <= 2 * n + 1; ++k)
          base.push_back({Rational((int64_t)k), 0});
        break;
      case Kind::Shuffle:
        // parameter-free quantification needs a seed point; the structure
        // is homogeneous, so any representative works
        if (base.empty()) base.push_back({Rational(0), 0});
        // close under partners so adjacency types are represented
        for (size_t i = 0, m = base.size(); i < m; ++i)
          base.push_back({base[i].q, 1 - base[i].half});
        break;
    }
    std::sort(base.begin(), base.end());
    base.erase(std::unique(base.begin(), base.end()), base.end());
    std::vector<DE> out = base;
    for (size_t i = 0; i + 1 < base.size(); ++i) {
      const DE &a = base[i], &b = base[i + 1];
      if (kind == Kind::Shuffle) {
        if (a.q == b.q) continue;  // a pair: nothing strictly between
        Rational m = mid(a.q, b.q);
        out.push_back({m, 0});
        out.push_back({m, 1});
      } else if (kind == Kind::Dlo01 || same_interval(a, b)) {
        out.push_back({mid(a.q, b.q), 0});
      }
      // across an interval gap every strictly-between point is an
      // endpoint, and those are already in the base
    }
    if (kind == Kind::Shuffle && !base.empty()) {
      Rational below = base.front().q - Rational(1);
      Rational above = base.back().q + Rational(1);
      out.push_back({below, 0});
      out.push_back({below, 1});
      out.push_back({above, 0});
      out.push_back({above, 1});
    }
    std::vector<DE> in;
    for (const DE& e : out)
      if (in_universe(e)) in.push_back(e);
    return in;
  }

  bool eval(const FormulaPtr& ff, const std::map<std::string, DE>& env) const {
    switch (ff->kind) {
      case Formula::Kind::True:
        return true;
      case Formula::Kind::False:
        return false;
      case Formula::Kind::Eq:
        return term_value(ff->terms[0], env) == term_value(ff->terms[1], env);
      case Formula::Kind::Atom: {
        std::vector<DE> args;
        for (const auto& t : ff->terms) args.push_back(term_value(t, env));
        return atom(ff->sym, args);
      }
      case Formula::Kind::Not:
        return !eval(ff->lhs, env);
      case Formula::Kind::And:
        return eval(ff->lhs, env) && eval(ff->rhs, env);
      case Formula::Kind::Or:
        return eval(ff->lhs, env) || eval(ff->rhs, env);
      case Formula::Kind::Implies:
        return !eval(ff->lhs, env) || eval(ff->rhs, env);
      case Formula::Kind::Forall:
      case Formula::Kind::Exists: {
        bool ex = ff->kind == Formula::Kind::Exists;
        auto sub = env;
        for (const DE& v : candidates(env, dom_consts(ff))) {
          sub[ff->sym] = v;
          if (eval(ff->lhs, sub) == ex) return ex;
        }
        return !ex;
      }
    }
    throw FormulaError("bad formula kind");
  }
};

}  // namespace

bool classical_truth(const Presentation& p, const FormulaPtr& sentence) {
  if (!free_vars(sentence).empty())
    throw FormulaError("classical_truth expects a sentence");
  const Family* fam = p.family().get();
  if (auto* s = dynamic_cast<const SuccessorLineFamily*>(fam)) {
    SuccEval ev{s, &p.mapping(), max_s_nesting(sentence) + 1};
    return ev.eval(sentence, {});
  }
  if (dynamic_cast<const Dlo01Family*>(fam)) {
    DenseEval ev{DenseEval::Kind::Dlo01, fam, &p.mapping()};
    return ev.eval(sentence, {});
  }
  if (auto* iu = dynamic_cast<const IntervalUnionFamily*>(fam)) {
    DenseEval ev{DenseEval::Kind::IntervalUnion, fam, &p.mapping()};
    ev.n = iu->n();
    return ev.eval(sentence, {});
  }
  if (auto* sh = dynamic_cast<const ShuffleFamily*>(fam)) {
    DenseEval ev{DenseEval::Kind::Shuffle, fam, &p.mapping()};
    ev.with_adj = sh->with_adj();
    return ev.eval(sentence, {});
  }
  throw FormulaError("classical_truth: unsupported family " + fam->tag());
}

}  // namespace eldec
