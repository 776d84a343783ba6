#include "eldec/coding.hpp"

namespace eldec {

namespace {

uint64_t ipow(uint64_t b, unsigned e) {
  uint64_t r = 1;
  while (e--) r *= b;
  return r;
}

// Tuples over {0..n}^len: all of them, and those whose max entry is n.
uint64_t tuples_all(uint64_t n, unsigned len) { return ipow(n + 1, len); }
uint64_t tuples_maxed(uint64_t n, unsigned len) {
  return ipow(n + 1, len) - ipow(n, len);
}

// Lexicographic rank of `t` among arity-|t| tuples over {0..n} with max
// entry n. Scans positions; once an n has appeared the remaining suffix is
// unconstrained.
uint64_t tuple_rank(const std::vector<uint64_t>& t, uint64_t n) {
  uint64_t rank = 0;
  bool seen_n = false;
  for (size_t i = 0; i < t.size(); ++i) {
    unsigned rest = static_cast<unsigned>(t.size() - 1 - i);
    for (uint64_t v = 0; v < t[i]; ++v)
      rank += (seen_n || v == n) ? tuples_all(n, rest) : tuples_maxed(n, rest);
    if (t[i] == n) seen_n = true;
  }
  return rank;
}

std::vector<uint64_t> tuple_unrank(uint64_t rank, uint64_t n, unsigned arity) {
  std::vector<uint64_t> t(arity);
  bool seen_n = false;
  for (unsigned i = 0; i < arity; ++i) {
    unsigned rest = arity - 1 - i;
    for (uint64_t v = 0;; ++v) {
      uint64_t cnt =
          (seen_n || v == n) ? tuples_all(n, rest) : tuples_maxed(n, rest);
      if (rank < cnt) {
        t[i] = v;
        if (v == n) seen_n = true;
        break;
      }
      rank -= cnt;
    }
  }
  return t;
}

uint64_t term_const(const Term& t) {
  if (t.kind != Term::Kind::DomConst)
    throw FormulaError("atomic coding requires domain-constant terms, got " +
                       to_string(t));
  return t.index;
}

}  // namespace

uint64_t block_size(const Signature& sig, uint64_t n) {
  uint64_t s = n;  // equality atoms #i=#n, i<n
  for (const auto& r : sig.relations()) s += tuples_maxed(n, r.arity);
  return s;
}

uint64_t block_length(const Signature& sig, uint64_t n) {
  uint64_t s = 0;
  for (uint64_t m = 0; m <= n; ++m) s += block_size(sig, m);
  return s;
}

uint64_t block_start(const Signature& sig, uint64_t n) {
  return n == 0 ? 0 : block_length(sig, n - 1);
}

uint64_t encode_atomic(const Signature& sig, const FormulaPtr& atom) {
  if (!atom) throw FormulaError("null formula");
  if (atom->kind == Formula::Kind::Eq) {
    uint64_t a = term_const(atom->terms[0]);
    uint64_t b = term_const(atom->terms[1]);
    if (a == b) throw FormulaError("trivial equality has no code");
    uint64_t n = std::max(a, b), i = std::min(a, b);
    return block_start(sig, n) + i;
  }
  if (atom->kind != Formula::Kind::Atom)
    throw FormulaError("not an atomic sentence");
  auto ri = sig.relation_index(atom->sym);
  if (!ri) throw FormulaError("unknown relation: " + atom->sym);
  const auto& decl = sig.relations()[*ri];
  if (atom->terms.size() != decl.arity)
    throw FormulaError("arity mismatch for " + atom->sym);
  std::vector<uint64_t> t;
  uint64_t n = 0;
  for (const auto& tm : atom->terms) {
    t.push_back(term_const(tm));
    n = std::max(n, t.back());
  }
  uint64_t off = block_start(sig, n) + n;  // skip the equality atoms
  for (unsigned j = 0; j < *ri; ++j)
    off += tuples_maxed(n, sig.relations()[j].arity);
  return off + tuple_rank(t, n);
}

FormulaPtr decode_atomic(const Signature& sig, uint64_t code) {
  uint64_t n = 0, start = 0;
  while (code >= start + block_size(sig, n)) {
    start += block_size(sig, n);
    ++n;
  }
  uint64_t off = code - start;
  if (off < n) return mk_eq(Term::dom_const(off), Term::dom_const(n));
  off -= n;
  for (const auto& r : sig.relations()) {
    uint64_t cnt = tuples_maxed(n, r.arity);
    if (off < cnt) {
      auto t = tuple_unrank(off, n, r.arity);
      std::vector<Term> args;
      for (auto v : t) args.push_back(Term::dom_const(v));
      return mk_atom(r.name, std::move(args));
    }
    off -= cnt;
  }
  throw FormulaError("unreachable: code beyond block");
}

uint64_t code_block(const Signature& sig, uint64_t code) {
  uint64_t n = 0, start = 0;
  while (code >= start + block_size(sig, n)) {
    start += block_size(sig, n);
    ++n;
  }
  return n;
}

}  // namespace eldec
