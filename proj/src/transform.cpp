#include "eldec/transform.hpp"

#include <algorithm>

namespace eldec {

namespace {

FormulaPtr nnf_pos(const FormulaPtr& f);
FormulaPtr nnf_neg(const FormulaPtr& f);

FormulaPtr nnf_pos(const FormulaPtr& f) {
  switch (f->kind) {
    case Formula::Kind::True:
    case Formula::Kind::False:
    case Formula::Kind::Atom:
    case Formula::Kind::Eq:
      return f;
    case Formula::Kind::Not:
      return nnf_neg(f->lhs);
    case Formula::Kind::And:
      return mk_and(nnf_pos(f->lhs), nnf_pos(f->rhs));
    case Formula::Kind::Or:
      return mk_or(nnf_pos(f->lhs), nnf_pos(f->rhs));
    case Formula::Kind::Implies:
      return mk_or(nnf_neg(f->lhs), nnf_pos(f->rhs));
    case Formula::Kind::Forall:
      return mk_forall(f->sym, nnf_pos(f->lhs));
    case Formula::Kind::Exists:
      return mk_exists(f->sym, nnf_pos(f->lhs));
  }
  throw FormulaError("bad formula kind");
}

FormulaPtr nnf_neg(const FormulaPtr& f) {
  switch (f->kind) {
    case Formula::Kind::True:
      return mk_false();
    case Formula::Kind::False:
      return mk_true();
    case Formula::Kind::Atom:
    case Formula::Kind::Eq:
      return mk_not(f);
    case Formula::Kind::Not:
      return nnf_pos(f->lhs);
    case Formula::Kind::And:
      return mk_or(nnf_neg(f->lhs), nnf_neg(f->rhs));
    case Formula::Kind::Or:
      return mk_and(nnf_neg(f->lhs), nnf_neg(f->rhs));
    case Formula::Kind::Implies:
      return mk_and(nnf_pos(f->lhs), nnf_neg(f->rhs));
    case Formula::Kind::Forall:
      return mk_exists(f->sym, nnf_neg(f->lhs));
    case Formula::Kind::Exists:
      return mk_forall(f->sym, nnf_neg(f->lhs));
  }
  throw FormulaError("bad formula kind");
}

void flatten(Formula::Kind k, const FormulaPtr& f, std::vector<FormulaPtr>& out) {
  if (f->kind == k) {
    flatten(k, f->lhs, out);
    flatten(k, f->rhs, out);
  } else {
    out.push_back(f);
  }
}

}  // namespace

FormulaPtr nnf(const FormulaPtr& f) { return nnf_pos(f); }

FormulaPtr simplify(const FormulaPtr& f) {
  switch (f->kind) {
    case Formula::Kind::True:
    case Formula::Kind::False:
    case Formula::Kind::Atom:
      return f;
    case Formula::Kind::Eq:
      if (f->terms[0] == f->terms[1]) return mk_true();
      return f;
    case Formula::Kind::Not: {
      FormulaPtr a = simplify(f->lhs);
      if (a->kind == Formula::Kind::True) return mk_false();
      if (a->kind == Formula::Kind::False) return mk_true();
      if (a->kind == Formula::Kind::Not) return a->lhs;
      return mk_not(a);
    }
    case Formula::Kind::And:
    case Formula::Kind::Or: {
      bool conj = f->kind == Formula::Kind::And;
      std::vector<FormulaPtr> parts;
      flatten(f->kind, f, parts);
      std::vector<FormulaPtr> kept;
      for (const auto& p : parts) {
        FormulaPtr s = simplify(p);
        if (s->kind == (conj ? Formula::Kind::True : Formula::Kind::False))
          continue;  // neutral element
        if (s->kind == (conj ? Formula::Kind::False : Formula::Kind::True))
          return conj ? mk_false() : mk_true();  // absorbing element
        bool dup = false;
        for (const auto& k : kept)
          if (equal(k, s)) { dup = true; break; }
        if (!dup) kept.push_back(s);
      }
      if (kept.empty()) return conj ? mk_true() : mk_false();
      return conj ? mk_and_all(kept) : mk_or_all(kept);
    }
    case Formula::Kind::Implies: {
      FormulaPtr a = simplify(f->lhs);
      FormulaPtr b = simplify(f->rhs);
      if (a->kind == Formula::Kind::False) return mk_true();
      if (a->kind == Formula::Kind::True) return b;
      if (b->kind == Formula::Kind::True) return mk_true();
      return mk_implies(a, b);
    }
    case Formula::Kind::Forall:
    case Formula::Kind::Exists: {
      FormulaPtr body = simplify(f->lhs);
      if (body->kind == Formula::Kind::True ||
          body->kind == Formula::Kind::False)
        return body;  // domains are nonempty
      if (!free_vars(f->lhs).count(f->sym)) return body;
      return f->kind == Formula::Kind::Forall ? mk_forall(f->sym, body)
                                              : mk_exists(f->sym, body);
    }
  }
  throw FormulaError("bad formula kind");
}

namespace {

struct PrenexState {
  std::set<std::string> used;
  uint64_t counter = 0;

  std::string fresh(const std::string& base) {
    std::string cand = base;
    while (used.count(cand)) cand = base + "_" + std::to_string(counter++);
    used.insert(cand);
    return cand;
  }
};

std::pair<std::vector<QuantifierStep>, FormulaPtr> pull(const FormulaPtr& f,
                                                        PrenexState& st) {
  switch (f->kind) {
    case Formula::Kind::True:
    case Formula::Kind::False:
    case Formula::Kind::Atom:
    case Formula::Kind::Eq:
      return {{}, f};
    case Formula::Kind::Not: {
      // Input is in NNF, so the operand is an atom.
      return {{}, f};
    }
    case Formula::Kind::And:
    case Formula::Kind::Or: {
      auto [lp, lm] = pull(f->lhs, st);
      auto [rp, rm] = pull(f->rhs, st);
      lp.insert(lp.end(), rp.begin(), rp.end());
      FormulaPtr m = f->kind == Formula::Kind::And ? mk_and(lm, rm)
                                                   : mk_or(lm, rm);
      return {std::move(lp), m};
    }
    case Formula::Kind::Forall:
    case Formula::Kind::Exists: {
      std::string v = st.fresh(f->sym);
      FormulaPtr body = v == f->sym
                            ? f->lhs
                            : substitute(f->lhs, {{f->sym, Term::var(v)}});
      auto [p, m] = pull(body, st);
      p.insert(p.begin(),
               QuantifierStep{f->kind == Formula::Kind::Forall, v});
      return {std::move(p), m};
    }
    default:
      throw FormulaError("pull expects NNF input");
  }
}

}  // namespace

FormulaPtr rebuild_prenex(const std::vector<QuantifierStep>& prefix,
                          FormulaPtr matrix) {
  for (auto it = prefix.rbegin(); it != prefix.rend(); ++it)
    matrix = it->universal ? mk_forall(it->var, matrix)
                           : mk_exists(it->var, matrix);
  return matrix;
}

FormulaPtr to_prenex(const FormulaPtr& f) {
  FormulaPtr n = nnf(f);
  PrenexState st;
  st.used = free_vars(n);
  auto [prefix, matrix] = pull(n, st);
  return rebuild_prenex(prefix, matrix);
}

std::pair<std::vector<QuantifierStep>, FormulaPtr> split_prenex(
    const FormulaPtr& f) {
  std::vector<QuantifierStep> prefix;
  FormulaPtr cur = f;
  while (cur->kind == Formula::Kind::Forall ||
         cur->kind == Formula::Kind::Exists) {
    prefix.push_back({cur->kind == Formula::Kind::Forall, cur->sym});
    cur = cur->lhs;
  }
  if (!is_quantifier_free(cur))
    throw FormulaError("formula is not prenex");
  return {std::move(prefix), cur};
}

namespace {

// Restricted-growth strings over k positions enumerate set partitions.
void rgs_enumerate(unsigned k, std::vector<std::vector<unsigned>>& out) {
  std::vector<unsigned> cur(k, 0);
  auto rec = [&](auto&& self, unsigned i, unsigned maxv) -> void {
    if (i == k) {
      out.push_back(cur);
      return;
    }
    for (unsigned v = 0; v <= maxv + 1 && v <= i; ++v) {
      cur[i] = v;
      self(self, i + 1, std::max(maxv, v));
    }
  };
  if (k == 0) {
    out.push_back({});
    return;
  }
  cur[0] = 0;
  rec(rec, 1, 0);
}

}  // namespace

std::vector<EqualityCase> expand_equality_cases(
    const FormulaPtr& alpha, const std::vector<std::string>& vars) {
  unsigned k = static_cast<unsigned>(vars.size());
  std::vector<std::vector<unsigned>> patterns;
  rgs_enumerate(k, patterns);
  auto classes = [](const std::vector<unsigned>& p) {
    unsigned m = 0;
    for (auto v : p) m = std::max(m, v + 1);
    return m;
  };
  std::stable_sort(patterns.begin(), patterns.end(),
                   [&](const auto& a, const auto& b) {
                     unsigned ca = classes(a), cb = classes(b);
                     if (ca != cb) return ca < cb;
                     return a > b;  // reverse-lex within a class count
                   });
  std::vector<EqualityCase> out;
  for (const auto& p : patterns) {
    unsigned m = classes(p);
    // Representative of a class = its first occurrence, so identified
    // variables collapse onto an original variable of the tuple.
    std::vector<unsigned> rep(m);
    for (unsigned i = k; i-- > 0;) rep[p[i]] = i;
    std::vector<std::pair<std::string, Term>> subst;
    for (unsigned i = 0; i < k; ++i)
      if (rep[p[i]] != i)
        subst.emplace_back(vars[i], Term::var(vars[rep[p[i]]]));
    std::vector<FormulaPtr> guards{substitute(alpha, subst)};
    for (unsigned i = 0; i < k; ++i)
      if (rep[p[i]] != i)
        guards.push_back(
            mk_eq(Term::var(vars[i]), Term::var(vars[rep[p[i]]])));
    for (unsigned a = 0; a + 1 < m; ++a)
      for (unsigned b = a + 1; b < m; ++b)
        guards.push_back(mk_not(
            mk_eq(Term::var(vars[rep[a]]), Term::var(vars[rep[b]]))));
    out.push_back({p, mk_and_all(guards)});
  }
  return out;
}

}  // namespace eldec
