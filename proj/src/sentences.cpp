#include <functional>
#include <map>
#include <mutex>

#include "eldec/sentences.hpp"

namespace eldec {

namespace {

// Per-signature memoized generator of terms and formulas by weight.
// Depth d means bound variables x0..x(d-1) are in scope.
struct Generator {
  const Signature sig;

  std::map<std::pair<unsigned, unsigned>, std::vector<Term>> terms_memo;
  std::map<std::pair<unsigned, unsigned>, std::vector<FormulaPtr>> forms_memo;

  explicit Generator(Signature s) : sig(std::move(s)) {}

  const std::vector<Term>& terms(unsigned w, unsigned d) {
    auto key = std::make_pair(w, d);
    auto it = terms_memo.find(key);
    if (it != terms_memo.end()) return it->second;
    std::vector<Term> out;
    if (w == 1) {
      for (unsigned i = 0; i < d; ++i) out.push_back(Term::var("x" + std::to_string(i)));
      for (const auto& f : sig.functions())
        if (f.arity == 0) out.push_back(Term::named_const(f.name));
    }
    if (w >= 2) out.push_back(Term::dom_const(w - 2));
    for (const auto& f : sig.functions()) {
      if (f.arity != 1 || w < 2) continue;
      for (const Term& t : terms(w - 1, d))
        out.push_back(Term::app(f.name, {t}));
    }
    return terms_memo.emplace(key, std::move(out)).first->second;
  }

  void pairs(unsigned total, unsigned d,
             const std::function<void(const Term&, const Term&)>& fn) {
    for (unsigned w1 = 1; w1 + 1 <= total; ++w1)
      for (const Term& a : terms(w1, d))
        for (const Term& b : terms(total - w1, d)) fn(a, b);
  }

  const std::vector<FormulaPtr>& formulas(unsigned w, unsigned d) {
    auto key = std::make_pair(w, d);
    auto it = forms_memo.find(key);
    if (it != forms_memo.end()) return it->second;
    std::vector<FormulaPtr> out;
    // quantifiers first: keeps the codes of simple quantified sentences
    // small, which the budgeted searches over sentence codes rely on
    if (w >= 3) {
      std::string v = "x" + std::to_string(d);
      for (const FormulaPtr& b : formulas(w - 2, d + 1))
        out.push_back(mk_exists(v, b));
      for (const FormulaPtr& b : formulas(w - 2, d + 1))
        out.push_back(mk_forall(v, b));
    }
    if (w >= 2) {
      for (const auto& r : sig.relations()) {
        if (r.arity == 1) {
          for (const Term& t : terms(w - 1, d))
            out.push_back(mk_atom(r.name, {t}));
        } else if (r.arity == 2) {
          pairs(w - 1, d, [&](const Term& a, const Term& b) {
            out.push_back(mk_atom(r.name, {a, b}));
          });
        }
      }
      pairs(w - 1, d,
            [&](const Term& a, const Term& b) { out.push_back(mk_eq(a, b)); });
      for (const FormulaPtr& f : formulas(w - 1, d)) out.push_back(mk_not(f));
      for (unsigned wl = 1; wl + 1 <= w - 1; ++wl) {
        const auto& ls = formulas(wl, d);
        const auto& rs = formulas(w - 1 - wl, d);
        for (const auto& l : ls)
          for (const auto& r : rs) out.push_back(mk_and(l, r));
      }
      for (unsigned wl = 1; wl + 1 <= w - 1; ++wl) {
        const auto& ls = formulas(wl, d);
        const auto& rs = formulas(w - 1 - wl, d);
        for (const auto& l : ls)
          for (const auto& r : rs) out.push_back(mk_or(l, r));
      }
    }
    return forms_memo.emplace(key, std::move(out)).first->second;
  }
};

std::string sig_key(const Signature& sig) {
  std::string k;
  for (const auto& r : sig.relations())
    k += r.name + "/" + std::to_string(r.arity) + ";";
  k += "|";
  for (const auto& f : sig.functions())
    k += f.name + "/" + std::to_string(f.arity) + ";";
  return k;
}

std::mutex& gen_mutex() {
  static std::mutex mu;
  return mu;
}

// caller must hold gen_mutex()
Generator& generator_for(const Signature& sig) {
  static std::map<std::string, Generator> gens;
  auto [it, fresh] = gens.try_emplace(sig_key(sig), sig);
  (void)fresh;
  return it->second;
}

constexpr unsigned kMaxWeight = 24;

// Rename bound variables to the canonical depth scheme.
FormulaPtr canonical_bound(const FormulaPtr& f, unsigned d) {
  switch (f->kind) {
    case Formula::Kind::Forall:
    case Formula::Kind::Exists: {
      std::string v = "x" + std::to_string(d);
      FormulaPtr body = f->lhs;
      if (f->sym != v) body = substitute(body, {{f->sym, Term::var(v)}});
      body = canonical_bound(body, d + 1);
      return f->kind == Formula::Kind::Forall ? mk_forall(v, body)
                                              : mk_exists(v, body);
    }
    case Formula::Kind::Not:
      return mk_not(canonical_bound(f->lhs, d));
    case Formula::Kind::And:
      return mk_and(canonical_bound(f->lhs, d), canonical_bound(f->rhs, d));
    case Formula::Kind::Or:
      return mk_or(canonical_bound(f->lhs, d), canonical_bound(f->rhs, d));
    case Formula::Kind::Implies:
      return mk_implies(canonical_bound(f->lhs, d), canonical_bound(f->rhs, d));
    default:
      return f;
  }
}

}  // namespace

FormulaPtr sentence_at(const Signature& sig, uint64_t code) {
  std::lock_guard<std::mutex> lock(gen_mutex());
  Generator& gen = generator_for(sig);
  uint64_t rest = code;
  for (unsigned w = 1; w <= kMaxWeight; ++w) {
    const auto& fs = gen.formulas(w, 0);
    if (rest < fs.size()) return fs[rest];
    rest -= fs.size();
  }
  throw FormulaError("sentence code too large: " + std::to_string(code));
}

std::optional<uint64_t> sentence_code(const Signature& sig, const FormulaPtr& s,
                                      uint64_t limit) {
  FormulaPtr canon = canonical_bound(s, 0);
  for (uint64_t c = 0; c < limit; ++c) {
    FormulaPtr cand;
    try {
      cand = sentence_at(sig, c);
    } catch (const FormulaError&) {
      return std::nullopt;
    }
    if (equal(cand, canon)) return c;
  }
  return std::nullopt;
}

uint64_t sentence_count_at_weight(const Signature& sig, unsigned weight) {
  std::lock_guard<std::mutex> lock(gen_mutex());
  return generator_for(sig).formulas(weight, 0).size();
}

}  // namespace eldec
