#include "eldec/theories.hpp"
#include "qe_util.hpp"

// Quantifier elimination for the theory of (ω, successor, 0). Every term
// is S^k applied to a variable, the zero constant, or a domain constant;
// a positive equation involving the eliminated variable pins it to an
// offset of another base, and purely negative constraints are vacuous
// because the domain is infinite.

namespace eldec {

namespace {

using qedetail::dnf;

struct STerm {
  enum class Base { Var, Zero, DomConst };
  Base base = Base::Var;
  std::string var;
  uint64_t idx = 0;
  int64_t k = 0;  // number of S applications
};

STerm sterm(const Term& t) {
  switch (t.kind) {
    case Term::Kind::Var:
      return {STerm::Base::Var, t.name, 0, 0};
    case Term::Kind::DomConst:
      return {STerm::Base::DomConst, "", t.index, 0};
    case Term::Kind::NamedConst:
      if (t.name == "zero") return {STerm::Base::Zero, "", 0, 0};
      throw FormulaError("unknown constant for successor theory: " + t.name);
    case Term::Kind::App: {
      if (t.name != "S" || t.args.size() != 1)
        throw FormulaError("unsupported function term: " + to_string(t));
      STerm s = sterm(t.args[0]);
      ++s.k;
      return s;
    }
  }
  throw FormulaError("bad term");
}

Term term_of(const STerm& s) {
  Term base;
  switch (s.base) {
    case STerm::Base::Var: base = Term::var(s.var); break;
    case STerm::Base::Zero: base = Term::named_const("zero"); break;
    case STerm::Base::DomConst: base = Term::dom_const(s.idx); break;
  }
  for (int64_t i = 0; i < s.k; ++i) base = Term::app("S", {base});
  return base;
}

bool same_base(const STerm& a, const STerm& b) {
  if (a.base != b.base) return false;
  switch (a.base) {
    case STerm::Base::Var: return a.var == b.var;
    case STerm::Base::Zero: return true;
    case STerm::Base::DomConst: return a.idx == b.idx;
  }
  return false;
}

bool is_var(const STerm& s, const std::string& x) {
  return s.base == STerm::Base::Var && s.var == x;
}

struct Lit {
  STerm l, r;
  bool pos = true;
};

// Static truth of an equation, when decidable from the bases alone.
// Distinct domain constants denote distinct elements, so offset equations
// between them with equal shifts are false.
std::optional<bool> fold_eq(const STerm& a, const STerm& b) {
  if (same_base(a, b)) return a.k == b.k;
  auto zero_side = [](const STerm& z, const STerm& o) -> std::optional<bool> {
    // S^k(zero) = S^j(other): other ≥ 0 forces k ≥ j; nothing more is
    // static since `other` is an opaque element.
    if (z.k < o.k) return false;
    return std::nullopt;
  };
  if (a.base == STerm::Base::Zero && b.base != STerm::Base::Zero)
    return zero_side(a, b);
  if (b.base == STerm::Base::Zero && a.base != STerm::Base::Zero)
    return zero_side(b, a);
  if (a.base == STerm::Base::DomConst && b.base == STerm::Base::DomConst &&
      a.k == b.k)
    return false;  // distinct elements shifted equally stay distinct
  return std::nullopt;
}

Lit shifted_eq(STerm l, int64_t dl, STerm r, int64_t dr, bool pos) {
  int64_t m = std::max<int64_t>({0, -(l.k + dl), -(r.k + dr)});
  l.k += dl + m;
  r.k += dr + m;
  return {l, r, pos};
}

FormulaPtr lit_formula(const Lit& t) {
  FormulaPtr eq = mk_eq(term_of(t.l), term_of(t.r));
  return t.pos ? eq : mk_not(eq);
}

std::optional<Lit> parse_lit(const FormulaPtr& f) {
  bool pos = true;
  FormulaPtr a = f;
  if (a->kind == Formula::Kind::Not) {
    pos = false;
    a = a->lhs;
  }
  if (a->kind == Formula::Kind::Eq)
    return Lit{sterm(a->terms[0]), sterm(a->terms[1]), pos};
  if (a->kind == Formula::Kind::Atom) {
    if (a->sym == "S" && a->terms.size() == 2) {
      STerm l = sterm(a->terms[0]);
      ++l.k;
      return Lit{l, sterm(a->terms[1]), pos};
    }
    if (a->sym == "Zero" && a->terms.size() == 1)
      return Lit{sterm(a->terms[0]), {STerm::Base::Zero, "", 0, 0}, pos};
  }
  throw FormulaError("unsupported atom for successor theory: " + to_string(a));
}

FormulaPtr elim_exists(const std::string& x, const FormulaPtr& body) {
  std::vector<FormulaPtr> disjuncts;
  for (const auto& conj : dnf(nnf(body))) {
    std::vector<Lit> lits;
    bool dead = false;
    for (const auto& lf : conj) {
      Lit t = *parse_lit(lf);
      auto st = fold_eq(t.l, t.r);
      if (st) {
        if (*st != t.pos) { dead = true; break; }
        continue;
      }
      lits.push_back(t);
    }
    if (dead) continue;

    // a positive equation with x on exactly one side pins x down
    auto xonly = [&](const Lit& t) {
      return is_var(t.l, x) != is_var(t.r, x);
    };
    auto pin = std::find_if(lits.begin(), lits.end(), [&](const Lit& t) {
      return t.pos && xonly(t);
    });

    std::vector<FormulaPtr> out;
    if (pin != lits.end()) {
      Lit solved = *pin;
      if (is_var(solved.r, x)) std::swap(solved.l, solved.r);
      int64_t delta = solved.r.k - solved.l.k;  // x = base + delta
      STerm w = solved.r;
      w.k = 0;
      if (w.base == STerm::Base::Zero && delta < 0) continue;  // x < 0
      if (delta < 0)  // x exists iff base ≥ −delta
        for (int64_t j = 0; j < -delta; ++j)
          out.push_back(mk_not(mk_eq(
              term_of(w), term_of({STerm::Base::Zero, "", 0, j}))));
      bool bad = false;
      for (auto it = lits.begin(); it != lits.end(); ++it) {
        if (it == pin) continue;
        Lit t = *it;
        if (is_var(t.r, x)) std::swap(t.l, t.r);
        if (is_var(t.l, x)) {
          // S^c(x) ⋈ r becomes S^{c+delta}(w) ⋈ r, balanced nonnegative
          Lit nw = shifted_eq(w, t.l.k + delta, t.r, 0, t.pos);
          auto st = fold_eq(nw.l, nw.r);
          if (st) {
            if (*st != nw.pos) { bad = true; break; }
            continue;
          }
          out.push_back(lit_formula(nw));
        } else {
          out.push_back(lit_formula(t));
        }
      }
      if (bad) continue;
    } else {
      // only negative constraints mention x: ω is infinite, drop them
      // (a negative equation with x on both sides folded away already)
      for (const auto& t : lits) {
        if (is_var(t.l, x) || is_var(t.r, x)) continue;
        out.push_back(lit_formula(t));
      }
    }
    disjuncts.push_back(mk_and_all(out));
  }
  return simplify(mk_or_all(disjuncts));
}

FormulaPtr qe_rec(const FormulaPtr& f) {
  switch (f->kind) {
    case Formula::Kind::True:
    case Formula::Kind::False:
    case Formula::Kind::Atom:
    case Formula::Kind::Eq:
      return f;
    case Formula::Kind::Not:
      return mk_not(qe_rec(f->lhs));
    case Formula::Kind::And:
      return mk_and(qe_rec(f->lhs), qe_rec(f->rhs));
    case Formula::Kind::Or:
      return mk_or(qe_rec(f->lhs), qe_rec(f->rhs));
    case Formula::Kind::Implies:
      return mk_implies(qe_rec(f->lhs), qe_rec(f->rhs));
    case Formula::Kind::Exists:
      return elim_exists(f->sym, qe_rec(f->lhs));
    case Formula::Kind::Forall:
      return simplify(
          mk_not(elim_exists(f->sym, mk_not(qe_rec(f->lhs)))));
  }
  throw FormulaError("bad formula kind");
}

}  // namespace

FormulaPtr qe_succ_full(const FormulaPtr& f) { return simplify(qe_rec(f)); }

}  // namespace eldec
