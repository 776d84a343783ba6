#include "eldec/theories.hpp"
#include "qe_util.hpp"

// Langford-style elimination for the dense linear order with distinct
// endpoints lo < hi. Negations are expanded by totality, an equation
// involving the eliminated variable substitutes it away, and what
// remains reduces to the satisfiability of lower/upper constraints,
// witnessed by density (or by an endpoint when one side is unbounded).

namespace eldec {

namespace {

using qedetail::dnf;
using qedetail::mentions_var;

enum class Base { Var, Lo, Hi, DomConst };

Base base_of(const Term& t) {
  switch (t.kind) {
    case Term::Kind::Var: return Base::Var;
    case Term::Kind::DomConst: return Base::DomConst;
    case Term::Kind::NamedConst:
      if (t.name == "lo") return Base::Lo;
      if (t.name == "hi") return Base::Hi;
      throw FormulaError("unknown constant for dense order: " + t.name);
    case Term::Kind::App:
      throw FormulaError("dense orders have no function terms: " + to_string(t));
  }
  throw FormulaError("bad term");
}

struct OLit {
  bool is_lt;  // else equation
  Term a, b;
};

// lo is least and hi is greatest, and they are distinct; domain constants
// with different indices are distinct elements.
std::optional<bool> fold(const OLit& t) {
  Base x = base_of(t.a), y = base_of(t.b);
  bool same = t.a == t.b;
  if (t.is_lt) {
    if (same) return false;
    if (x == Base::Lo && y == Base::Hi) return true;
    if (x == Base::Hi || y == Base::Lo) return false;
    return std::nullopt;
  }
  if (same) return true;
  if ((x == Base::Lo && y == Base::Hi) || (x == Base::Hi && y == Base::Lo))
    return false;
  if (x == Base::DomConst && y == Base::DomConst) return false;  // distinct
  return std::nullopt;
}

FormulaPtr lit_formula(const OLit& t) {
  auto st = fold(t);
  if (st) return *st ? mk_true() : mk_false();
  return t.is_lt ? mk_lt(t.a, t.b) : mk_eq(t.a, t.b);
}

// Normalize an atom (expanding the endpoint marks) and push negation by
// totality of the order.
void push_atom(const FormulaPtr& f, bool pos, std::vector<FormulaPtr>& out) {
  FormulaPtr a = f;
  OLit lit;
  if (a->kind == Formula::Kind::Eq) {
    lit = {false, a->terms[0], a->terms[1]};
  } else if (a->kind == Formula::Kind::Atom && a->sym == "<") {
    lit = {true, a->terms[0], a->terms[1]};
  } else if (a->kind == Formula::Kind::Atom && a->sym == "IsLo") {
    lit = {false, a->terms[0], Term::named_const("lo")};
  } else if (a->kind == Formula::Kind::Atom && a->sym == "IsHi") {
    lit = {false, a->terms[0], Term::named_const("hi")};
  } else {
    throw FormulaError("unsupported atom for dense order: " + to_string(a));
  }
  if (pos) {
    out.push_back(lit.is_lt ? mk_lt(lit.a, lit.b) : mk_eq(lit.a, lit.b));
  } else if (lit.is_lt) {
    out.push_back(mk_or(mk_lt(lit.b, lit.a), mk_eq(lit.a, lit.b)));
  } else {
    out.push_back(mk_or(mk_lt(lit.a, lit.b), mk_lt(lit.b, lit.a)));
  }
}

FormulaPtr expand_negations(const FormulaPtr& f) {
  switch (f->kind) {
    case Formula::Kind::True:
    case Formula::Kind::False:
      return f;
    case Formula::Kind::And:
      return mk_and(expand_negations(f->lhs), expand_negations(f->rhs));
    case Formula::Kind::Or:
      return mk_or(expand_negations(f->lhs), expand_negations(f->rhs));
    case Formula::Kind::Not: {
      std::vector<FormulaPtr> one;
      push_atom(f->lhs, false, one);
      return one[0];
    }
    default: {
      std::vector<FormulaPtr> one;
      push_atom(f, true, one);
      return one[0];
    }
  }
}

OLit parse_lit(const FormulaPtr& f) {
  if (f->kind == Formula::Kind::Eq) return {false, f->terms[0], f->terms[1]};
  if (f->kind == Formula::Kind::Atom && f->sym == "<")
    return {true, f->terms[0], f->terms[1]};
  throw FormulaError("expected an order literal: " + to_string(f));
}

Term subst(const Term& t, const std::string& x, const Term& repl) {
  return t.kind == Term::Kind::Var && t.name == x ? repl : t;
}

FormulaPtr elim_exists(const std::string& x, const FormulaPtr& body) {
  std::vector<FormulaPtr> disjuncts;
  FormulaPtr expanded = expand_negations(nnf(body));
  for (auto& conj : dnf(expanded)) {
    std::vector<OLit> lits;
    for (const auto& lf : conj) lits.push_back(parse_lit(lf));

    // an equation pins x to the other side
    auto is_x = [&](const Term& t) {
      return t.kind == Term::Kind::Var && t.name == x;
    };
    for (size_t i = 0; i < lits.size(); ++i) {
      const OLit& t = lits[i];
      if (t.is_lt || !(is_x(t.a) != is_x(t.b))) continue;
      Term repl = is_x(t.a) ? t.b : t.a;
      std::vector<OLit> rest;
      for (size_t j = 0; j < lits.size(); ++j) {
        if (j == i) continue;
        rest.push_back({lits[j].is_lt, subst(lits[j].a, x, repl),
                        subst(lits[j].b, x, repl)});
      }
      lits = std::move(rest);
      i = static_cast<size_t>(-1);  // rescan for further pinning equations
    }

    bool dead = false;
    std::vector<FormulaPtr> out;
    std::vector<Term> lower, upper;
    for (const OLit& t : lits) {
      auto st = fold(t);
      if (st) {
        if (!*st) { dead = true; break; }
        continue;
      }
      bool ax = is_x(t.a), bx = is_x(t.b);
      if (!ax && !bx) {
        out.push_back(lit_formula(t));
      } else if (t.is_lt && ax && !bx) {
        upper.push_back(t.b);
      } else if (t.is_lt && bx && !ax) {
        lower.push_back(t.a);
      } else {
        // x = x handled by fold; x < x likewise
        throw FormulaError("unreachable order literal shape");
      }
    }
    if (dead) continue;

    for (const auto& l : lower)
      for (const auto& u : upper) out.push_back(lit_formula({true, l, u}));
    if (lower.empty())
      for (const auto& u : upper)
        out.push_back(lit_formula({true, Term::named_const("lo"), u}));
    if (upper.empty())
      for (const auto& l : lower)
        out.push_back(lit_formula({true, l, Term::named_const("hi")}));
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
      return simplify(mk_not(elim_exists(f->sym, mk_not(qe_rec(f->lhs)))));
  }
  throw FormulaError("bad formula kind");
}

}  // namespace

FormulaPtr qe_dlo_full(const FormulaPtr& f) { return simplify(qe_rec(f)); }

}  // namespace eldec
