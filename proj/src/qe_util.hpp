#ifndef ELDEC_QE_UTIL_HPP
#define ELDEC_QE_UTIL_HPP

#include "eldec/transform.hpp"

namespace eldec::qedetail {

/// Disjunctive normal form of an NNF quantifier-free formula, as a list of
/// literal conjunctions. True yields one empty conjunction; False yields
/// no conjunctions.
inline std::vector<std::vector<FormulaPtr>> dnf(const FormulaPtr& f) {
  using Conjs = std::vector<std::vector<FormulaPtr>>;
  switch (f->kind) {
    case Formula::Kind::True:
      return {{}};
    case Formula::Kind::False:
      return {};
    case Formula::Kind::Atom:
    case Formula::Kind::Eq:
    case Formula::Kind::Not:
      return {{f}};
    case Formula::Kind::Or: {
      Conjs l = dnf(f->lhs), r = dnf(f->rhs);
      l.insert(l.end(), r.begin(), r.end());
      return l;
    }
    case Formula::Kind::And: {
      Conjs l = dnf(f->lhs), r = dnf(f->rhs), out;
      for (const auto& a : l)
        for (const auto& b : r) {
          auto c = a;
          c.insert(c.end(), b.begin(), b.end());
          out.push_back(std::move(c));
        }
      return out;
    }
    default:
      throw FormulaError("dnf expects quantifier-free NNF input");
  }
}

inline FormulaPtr conj_formula(const std::vector<FormulaPtr>& lits) {
  return mk_and_all(lits);
}

inline bool mentions_var(const Term& t, const std::string& x) {
  if (t.kind == Term::Kind::Var) return t.name == x;
  for (const auto& a : t.args)
    if (mentions_var(a, x)) return true;
  return false;
}

inline bool mentions_var(const FormulaPtr& f, const std::string& x) {
  return free_vars(f).count(x) != 0;
}

}  // namespace eldec::qedetail

#endif
