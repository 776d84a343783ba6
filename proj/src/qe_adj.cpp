#include "eldec/theories.hpp"
#include "qe_util.hpp"

// Elimination for the doubled dense order with the adjacency relation
// Adj(x,y) ("y is the immediate successor paired with x"). The order is
// dense *except* across Adj pairs, so an existential between bounds holds
// exactly when the tightest bound pair is not adjacent. The helper
// predicate Lh ("left half": the element that has a partner above it)
// closes the language under elimination; callers expand it back to a
// universal formula (Lh(t) iff nothing is adjacent-below t).

namespace eldec {

namespace {

using qedetail::dnf;

enum class Op { Lt, Eq, Adj, Lh };

struct ALit {
  Op op;
  Term a, b;
  bool pos = true;
};

std::optional<bool> fold(const ALit& t) {
  bool same = t.a == t.b;
  bool dc = t.a.kind == Term::Kind::DomConst && t.b.kind == Term::Kind::DomConst;
  std::optional<bool> raw;
  switch (t.op) {
    case Op::Lt:
      if (same) raw = false;
      break;
    case Op::Eq:
      if (same) raw = true;
      else if (dc) raw = false;
      break;
    case Op::Adj:
      if (same) raw = false;  // never adjacent to oneself
      break;
    case Op::Lh:
      break;
  }
  if (!raw) return std::nullopt;
  return t.pos == *raw;
}

FormulaPtr atom_formula(Op op, const Term& a, const Term& b) {
  switch (op) {
    case Op::Lt: return mk_lt(a, b);
    case Op::Eq: return mk_eq(a, b);
    case Op::Adj: return mk_atom("Adj", {a, b});
    case Op::Lh: return mk_atom("Lh", {a});
  }
  throw FormulaError("bad op");
}

FormulaPtr lit_formula(const ALit& t) {
  auto st = fold(t);
  if (st) return *st ? mk_true() : mk_false();
  FormulaPtr f = atom_formula(t.op, t.a, t.b);
  return t.pos ? f : mk_not(f);
}

ALit parse_base(const FormulaPtr& a, bool pos) {
  if (a->kind == Formula::Kind::Eq) return {Op::Eq, a->terms[0], a->terms[1], pos};
  if (a->kind == Formula::Kind::Atom) {
    if (a->sym == "<") return {Op::Lt, a->terms[0], a->terms[1], pos};
    if (a->sym == "Adj") return {Op::Adj, a->terms[0], a->terms[1], pos};
    if (a->sym == "Lh") return {Op::Lh, a->terms[0], a->terms[0], pos};
  }
  throw FormulaError("unsupported atom for adjacency theory: " + to_string(a));
}

// Totality expansion: negated order/equation literals become positive
// disjunctions; negated Adj and Lh stay as literals.
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
      ALit t = parse_base(f->lhs, false);
      if (t.op == Op::Lt) return mk_or(mk_lt(t.b, t.a), mk_eq(t.a, t.b));
      if (t.op == Op::Eq) return mk_or(mk_lt(t.a, t.b), mk_lt(t.b, t.a));
      return f;
    }
    default: {
      parse_base(f, true);  // validate
      return f;
    }
  }
}

bool is_var(const Term& t, const std::string& x) {
  return t.kind == Term::Kind::Var && t.name == x;
}

Term subst(const Term& t, const std::string& x, const Term& repl) {
  return is_var(t, x) ? repl : t;
}

// Rewrite a literal about x when Adj(t,x) holds (x is the partner above
// t); `right` distinguishes that case from Adj(x,t).
FormulaPtr rewrite_with_partner(const ALit& l, const std::string& x,
                                const Term& t, bool right) {
  bool ax = is_var(l.a, x), bx = is_var(l.b, x);
  if (!ax && !bx) return lit_formula(l);
  auto neg = [&](FormulaPtr f) { return l.pos ? f : simplify(mk_not(f)); };
  switch (l.op) {
    case Op::Lt:  // expanded negations: only positive Lt arrives
      if (ax && bx) return mk_false();
      if (right) {  // x just above t
        if (bx) return mk_or(mk_lt(l.a, t), mk_eq(l.a, t));   // u < x
        return mk_and(mk_lt(t, l.b), mk_not(mk_atom("Adj", {t, l.b})));
      }
      // x just below t
      if (bx) return mk_and(mk_lt(l.a, t), mk_not(mk_atom("Adj", {l.a, t})));
      return mk_or(mk_lt(t, l.b), mk_eq(t, l.b));  // x < u
    case Op::Eq: {
      const Term& u = ax ? l.b : l.a;
      if (ax && bx) return l.pos ? mk_true() : mk_false();
      return neg(right ? mk_atom("Adj", {t, u}) : mk_atom("Adj", {u, t}));
    }
    case Op::Adj: {
      if (ax && bx) return l.pos ? mk_false() : mk_true();
      if (bx) {  // Adj(u, x)
        if (right) return neg(mk_eq(l.a, t));
        return l.pos ? mk_false() : mk_true();  // x is a left half
      }
      // Adj(x, u)
      if (right) return l.pos ? mk_false() : mk_true();  // x is a right half
      return neg(mk_eq(l.b, t));
    }
    case Op::Lh:
      // right partner is never a left half; left partner always is
      return (right == l.pos) ? mk_false() : mk_true();
  }
  throw FormulaError("bad op");
}

FormulaPtr elim_exists(const std::string& x, const FormulaPtr& body);

FormulaPtr elim_conjunct(const std::string& x, std::vector<ALit> lits) {
  // equations pin x down
  for (size_t i = 0; i < lits.size(); ++i) {
    const ALit& t = lits[i];
    if (t.op != Op::Eq || !t.pos || is_var(t.a, x) == is_var(t.b, x)) continue;
    Term repl = is_var(t.a, x) ? t.b : t.a;
    std::vector<FormulaPtr> out;
    for (size_t j = 0; j < lits.size(); ++j) {
      if (j == i) continue;
      ALit s = lits[j];
      s.a = subst(s.a, x, repl);
      s.b = subst(s.b, x, repl);
      out.push_back(lit_formula(s));
    }
    return simplify(mk_and_all(out));
  }

  // a positive adjacency with x pins x to a partner
  for (size_t i = 0; i < lits.size(); ++i) {
    const ALit& t = lits[i];
    if (t.op != Op::Adj || !t.pos) continue;
    bool ax = is_var(t.a, x), bx = is_var(t.b, x);
    if (ax == bx) continue;
    bool right = bx;  // Adj(t, x): x is t's right partner
    Term other = right ? t.a : t.b;
    std::vector<FormulaPtr> out;
    // partner exists iff `other` is the matching half
    FormulaPtr lh = mk_atom("Lh", {other});
    out.push_back(right ? lh : mk_not(lh));
    for (size_t j = 0; j < lits.size(); ++j) {
      if (j == i) continue;
      out.push_back(rewrite_with_partner(lits[j], x, other, right));
    }
    return simplify(mk_and_all(out));
  }

  // bounds case: avoidance and half constraints on x are always
  // satisfiable in the (infinite) candidate region, so only the order
  // bounds matter — plus non-adjacency of the tightest pair.
  std::vector<FormulaPtr> out;
  std::vector<Term> lower, upper;
  bool dead = false;
  for (const ALit& t : lits) {
    auto st = fold(t);
    if (st) {
      if (!*st) { dead = true; break; }
      continue;
    }
    bool ax = qedetail::mentions_var(t.a, x), bx = qedetail::mentions_var(t.b, x);
    if (!ax && !bx) {
      out.push_back(lit_formula(t));
      continue;
    }
    if (t.op == Op::Lt && t.pos) {
      if (ax && bx) { dead = true; break; }  // x < x
      if (ax) upper.push_back(t.b);
      else lower.push_back(t.a);
      continue;
    }
    // ¬Adj(·,x), ¬Adj(x,·), ±Lh(x), ¬Eq never block an infinite region
  }
  if (dead) return mk_false();
  if (!lower.empty() && !upper.empty()) {
    for (const auto& l : lower)
      for (const auto& u : upper) out.push_back(lit_formula({Op::Lt, l, u, true}));
    std::vector<FormulaPtr> tight;
    for (const auto& lstar : lower)
      for (const auto& ustar : upper) {
        std::vector<FormulaPtr> piece;
        for (const auto& l : lower)
          piece.push_back(simplify(
              mk_or(lit_formula({Op::Lt, l, lstar, true}),
                    lit_formula({Op::Eq, l, lstar, true}))));
        for (const auto& u : upper)
          piece.push_back(simplify(
              mk_or(lit_formula({Op::Lt, ustar, u, true}),
                    lit_formula({Op::Eq, ustar, u, true}))));
        piece.push_back(lit_formula({Op::Adj, lstar, ustar, false}));
        tight.push_back(mk_and_all(piece));
      }
    out.push_back(simplify(mk_or_all(tight)));
  }
  return simplify(mk_and_all(out));
}

FormulaPtr elim_exists(const std::string& x, const FormulaPtr& body) {
  std::vector<FormulaPtr> disjuncts;
  for (auto& conj : dnf(expand_negations(nnf(body)))) {
    std::vector<ALit> lits;
    bool dead = false;
    for (const auto& lf : conj) {
      bool pos = lf->kind != Formula::Kind::Not;
      ALit t = parse_base(pos ? lf : lf->lhs, pos);
      auto st = fold(t);
      if (st) {
        if (!*st) { dead = true; break; }
        continue;
      }
      lits.push_back(t);
    }
    if (dead) continue;
    disjuncts.push_back(elim_conjunct(x, std::move(lits)));
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

FormulaPtr qe_adj_full(const FormulaPtr& f) { return simplify(qe_rec(f)); }

}  // namespace eldec
