#include "eldec/presentations.hpp"

#include <algorithm>
#include <sstream>

namespace eldec {

// --- families ---------------------------------------------------------

SuccessorLineFamily::SuccessorLineFamily(uint64_t shift, bool with_zero)
    : shift_(shift), with_zero_(with_zero),
      sig_(with_zero ? Signature({{"S", 2}, {"Zero", 1}})
                     : Signature({{"S", 2}})) {
  if (with_zero && shift != 0)
    throw FormulaError("Zero-marked successor line requires shift 0");
}

bool SuccessorLineFamily::atom(const std::string& rel,
                               const std::vector<uint64_t>& idx) const {
  if (rel == "S") return idx[1] == idx[0] + 1;
  if (rel == "Zero" && with_zero_) return natural(idx[0]) == 0;
  throw FormulaError("unknown relation for successor line: " + rel);
}

std::string SuccessorLineFamily::tag() const {
  std::string base = with_zero_ ? "succ0" : "succ";
  return base + ":shift=" + std::to_string(shift_);
}

Dlo01Family::Dlo01Family() : sig_({{"<", 2}, {"IsLo", 1}, {"IsHi", 1}}) {}

Rational Dlo01Family::value(uint64_t i) const {
  if (i == 0) return Rational(0);
  if (i == 1) return Rational(1);
  uint64_t want = i - 2;
  std::lock_guard<std::mutex> lk(mu_);
  while (interior_.size() <= want) {
    Rational q = calkin_wilf(cw_next_++);
    if (q < Rational(1)) interior_.push_back(q);
  }
  return interior_[want];
}

bool Dlo01Family::atom(const std::string& rel,
                       const std::vector<uint64_t>& idx) const {
  if (rel == "<") return value(idx[0]) < value(idx[1]);
  if (rel == "IsLo") return idx[0] == 0;
  if (rel == "IsHi") return idx[0] == 1;
  throw FormulaError("unknown relation for dlo01: " + rel);
}

IntervalUnionFamily::IntervalUnionFamily(unsigned n) : n_(n) {
  std::vector<RelationDecl> rels{{"<", 2}};
  for (unsigned i = 0; i < 2 * n + 2; ++i)
    rels.push_back({"E" + std::to_string(i), 1});
  sig_ = Signature(rels);
}

std::string IntervalUnionFamily::tag() const {
  return "a_n:n=" + std::to_string(n_);
}

Rational IntervalUnionFamily::value(uint64_t i) const {
  uint64_t endpoints = 2 * (n_ + 1);
  if (i < endpoints) return Rational(static_cast<int64_t>(i));
  uint64_t m = i - endpoints;
  uint64_t interval = m % (n_ + 1);
  uint64_t k = m / (n_ + 1);
  std::lock_guard<std::mutex> lk(mu_);
  while (interior_.size() <= k) {
    Rational q = calkin_wilf(cw_next_++);
    if (q < Rational(1)) interior_.push_back(q);
  }
  return Rational(static_cast<int64_t>(2 * interval)) + interior_[k];
}

bool IntervalUnionFamily::atom(const std::string& rel,
                               const std::vector<uint64_t>& idx) const {
  if (rel == "<") return value(idx[0]) < value(idx[1]);
  if (rel.size() > 1 && rel[0] == 'E') {
    unsigned e = static_cast<unsigned>(std::stoul(rel.substr(1)));
    if (e < 2 * n_ + 2) return idx[0] == e;
  }
  throw FormulaError("unknown relation for interval union: " + rel);
}

ShuffleFamily::ShuffleFamily(bool with_adj)
    : with_adj_(with_adj),
      sig_(with_adj ? Signature({{"<", 2}, {"Adj", 2}})
                    : Signature({{"<", 2}})) {}

std::pair<Rational, int> ShuffleFamily::value(uint64_t i) const {
  return {rational_at(i / 2), static_cast<int>(i % 2)};
}

bool ShuffleFamily::atom(const std::string& rel,
                         const std::vector<uint64_t>& idx) const {
  auto a = value(idx[0]), b = value(idx[1]);
  if (rel == "<")
    return a.first < b.first || (a.first == b.first && a.second < b.second);
  if (rel == "Adj" && with_adj_)
    return a.first == b.first && a.second == 0 && b.second == 1;
  throw FormulaError("unknown relation for shuffle: " + rel);
}

// --- conditions and permutations --------------------------------------

bool Condition::injective() const {
  std::set<uint64_t> seen;
  for (auto v : map)
    if (!seen.insert(v).second) return false;
  return true;
}

bool Condition::extends(const Condition& other) const {
  if (other.map.size() > map.size()) return false;
  return std::equal(other.map.begin(), other.map.end(), map.begin());
}

std::optional<uint64_t> Condition::preimage(uint64_t v) const {
  for (size_t i = 0; i < map.size(); ++i)
    if (map[i] == v) return i;
  return std::nullopt;
}

Permutation Permutation::identity() { return Permutation(); }

Permutation Permutation::fin_supp(std::map<uint64_t, uint64_t> pairs) {
  // Drop fixed points, then require the displaced values to be a
  // permutation of the displaced keys.
  for (auto it = pairs.begin(); it != pairs.end();)
    it = it->first == it->second ? pairs.erase(it) : std::next(it);
  std::set<uint64_t> keys, vals;
  for (const auto& [k, v] : pairs) {
    keys.insert(k);
    vals.insert(v);
  }
  if (keys != vals)
    throw FormulaError("finitely supported map is not a permutation");
  Permutation p;
  p.kind_ = Kind::FinSupp;
  p.pairs_ = std::move(pairs);
  return p;
}

Permutation Permutation::swap_pair(uint64_t a, uint64_t b) {
  if (a == b) return identity();
  return fin_supp({{a, b}, {b, a}});
}

Permutation Permutation::staged(Condition prefix) {
  if (!prefix.injective()) throw FormulaError("staged prefix not injective");
  Permutation p;
  p.kind_ = Kind::Staged;
  p.prefix_ = std::move(prefix);
  return p;
}

std::optional<uint64_t> Permutation::try_apply(uint64_t i) const {
  if (kind_ == Kind::FinSupp) {
    auto it = pairs_.find(i);
    return it == pairs_.end() ? i : it->second;
  }
  if (i < prefix_.map.size()) return prefix_.map[i];
  return std::nullopt;
}

uint64_t Permutation::apply(uint64_t i) const {
  auto v = try_apply(i);
  if (!v)
    throw InsufficientStages("element " + std::to_string(i) +
                             " beyond the staged prefix");
  return *v;
}

std::optional<uint64_t> Permutation::preimage(uint64_t v) const {
  if (kind_ == Kind::FinSupp) {
    for (const auto& [k, w] : pairs_)
      if (w == v) return k;
    if (pairs_.count(v)) return std::nullopt;  // v displaced, preimage elsewhere
    return v;
  }
  return prefix_.preimage(v);
}

Permutation Permutation::inverse() const {
  if (kind_ != Kind::FinSupp)
    throw FormulaError("staged permutations have no computable inverse");
  std::map<uint64_t, uint64_t> inv;
  for (const auto& [k, v] : pairs_) inv[v] = k;
  return fin_supp(std::move(inv));
}

bool Permutation::is_identity() const {
  return kind_ == Kind::FinSupp && pairs_.empty();
}

Permutation Permutation::compose(const Permutation& other) const {
  if (kind_ == Kind::FinSupp && other.kind_ == Kind::FinSupp) {
    std::map<uint64_t, uint64_t> out;
    std::set<uint64_t> support;
    for (const auto& [k, v] : pairs_) support.insert(k), (void)v;
    for (const auto& [k, v] : other.pairs_) support.insert(k), (void)v;
    for (auto i : support) out[i] = apply(other.apply(i));
    return fin_supp(std::move(out));
  }
  // Result is staged: take the longest computable prefix.
  Condition prefix;
  for (uint64_t i = 0;; ++i) {
    auto mid = other.try_apply(i);
    if (!mid) break;
    auto v = try_apply(*mid);
    if (!v) break;
    prefix.map.push_back(*v);
  }
  return staged(std::move(prefix));
}

std::string Permutation::describe() const {
  std::ostringstream os;
  if (kind_ == Kind::FinSupp) {
    if (pairs_.empty()) return "id";
    bool first = true;
    for (const auto& [k, v] : pairs_) {
      if (!first) os << ",";
      os << k << "=" << v;
      first = false;
    }
  } else {
    os << "staged[";
    for (size_t i = 0; i < prefix_.map.size(); ++i) {
      if (i) os << ",";
      os << prefix_.map[i];
    }
    os << "]";
  }
  return os.str();
}

// --- presentations -----------------------------------------------------

Presentation::Presentation(FamilyPtr fam, Permutation f)
    : family_(std::move(fam)), f_(std::move(f)) {}

std::optional<bool> Presentation::try_query(uint64_t code) const {
  FormulaPtr atom = decode_atomic(signature(), code);
  if (atom->kind == Formula::Kind::Eq) return false;  // distinct indices
  std::vector<uint64_t> idx;
  for (const auto& t : atom->terms) {
    auto v = f_.try_apply(t.index);
    if (!v) return std::nullopt;
    idx.push_back(*v);
  }
  return family_->atom(atom->sym, idx);
}

bool Presentation::query(uint64_t code) const {
  auto b = try_query(code);
  if (!b)
    throw InsufficientStages("query " + std::to_string(code) +
                             " beyond the staged prefix");
  return *b;
}

std::string Presentation::spec() const {
  if (f_.is_identity()) return family_->tag();
  return "pullback:" + family_->tag() + ":" + f_.describe();
}

Presentation pullback(const Presentation& p, const Permutation& f) {
  return Presentation(p.family(), p.mapping().compose(f));
}

std::vector<bool> initial_segment(const Presentation& p, uint64_t n) {
  uint64_t len = block_length(p.signature(), n);
  std::vector<bool> out(len);
  for (uint64_t c = 0; c < len; ++c) out[c] = p.query(c);
  return out;
}

std::optional<uint64_t> block_index_of_length(const Signature& sig,
                                              uint64_t length) {
  uint64_t n = 0, acc = 0;
  while (acc < length) acc += block_size(sig, n++);
  if (acc != length || n == 0) return std::nullopt;
  return n - 1;
}

FormulaPtr gamma_sigma(const Signature& sig, const std::vector<bool>& sigma) {
  auto m = block_index_of_length(sig, sigma.size());
  if (!m) throw FormulaError("diagram length is not a block boundary");
  std::vector<FormulaPtr> parts;
  for (uint64_t c = 0; c < sigma.size(); ++c) {
    FormulaPtr a = decode_atomic(sig, c);
    parts.push_back(sigma[c] ? a : mk_not(a));
  }
  // The equality bits already assert the distinctions when unset, but the
  // description must carry them even for strings with equality bits set.
  for (uint64_t i = 0; i <= *m; ++i)
    for (uint64_t j = i + 1; j <= *m; ++j) {
      FormulaPtr ne = mk_not(mk_eq(Term::dom_const(i), Term::dom_const(j)));
      bool present = false;
      for (const auto& p : parts)
        if (equal(p, ne)) { present = true; break; }
      if (!present) parts.push_back(ne);
    }
  return mk_and_all(parts);
}

std::vector<FormulaPtr> delta_restrict(const Presentation& p,
                                       const std::vector<uint64_t>& tuple) {
  std::set<uint64_t> elems(tuple.begin(), tuple.end());
  if (elems.size() != tuple.size())
    throw FormulaError("delta_restrict requires distinct elements");
  std::vector<FormulaPtr> out;
  if (tuple.empty()) return out;
  const auto& sig = p.signature();
  for (const auto& r : sig.relations()) {
    // all tuples over `tuple` of the relation's arity
    std::vector<size_t> pick(r.arity, 0);
    while (true) {
      std::vector<Term> args;
      for (auto pi : pick) args.push_back(Term::dom_const(tuple[pi]));
      FormulaPtr a = mk_atom(r.name, args);
      out.push_back(p.query(encode_atomic(sig, a)) ? a : mk_not(a));
      size_t i = pick.size();
      while (i > 0 && pick[i - 1] + 1 == tuple.size()) pick[--i] = 0;
      if (i == 0) break;
      ++pick[i - 1];
    }
  }
  for (size_t i = 0; i < tuple.size(); ++i)
    for (size_t j = i + 1; j < tuple.size(); ++j)
      out.push_back(mk_not(
          mk_eq(Term::dom_const(tuple[i]), Term::dom_const(tuple[j]))));
  return out;
}

Presentation canonicalize(const Presentation& e_pres,
                          const std::vector<uint64_t>& e, const Condition& p) {
  if (e.size() != p.map.size())
    throw FormulaError("canonicalize: tuple/condition length mismatch");
  // Build a finitely supported g with g(i) = e[i] by successive swaps.
  std::map<uint64_t, uint64_t> fwd, inv;
  auto get = [](std::map<uint64_t, uint64_t>& m, uint64_t i) {
    auto it = m.find(i);
    return it == m.end() ? i : it->second;
  };
  for (uint64_t i = 0; i < e.size(); ++i) {
    uint64_t j = get(inv, e[i]);  // current preimage of e[i]
    uint64_t old = get(fwd, i);
    fwd[i] = e[i];
    inv[e[i]] = i;
    fwd[j] = old;
    inv[old] = j;
  }
  return pullback(e_pres, Permutation::fin_supp(std::move(fwd)));
}

// --- builtin specs -----------------------------------------------------

namespace {

uint64_t parse_nat(const std::string& s) {
  size_t pos = 0;
  uint64_t v = std::stoull(s, &pos);
  if (pos != s.size()) throw FormulaError("bad number: " + s);
  return v;
}

std::optional<uint64_t> param_of(const std::string& spec,
                                 const std::string& head,
                                 const std::string& key) {
  if (spec.rfind(head + ":", 0) != 0) return std::nullopt;
  std::string rest = spec.substr(head.size() + 1);
  if (rest.rfind(key + "=", 0) != 0)
    throw FormulaError("expected " + key + "=<n> in: " + spec);
  return parse_nat(rest.substr(key.size() + 1));
}

}  // namespace

Presentation make_builtin(const std::string& spec) {
  if (spec == "succ" || spec == "succ:shift=0")
    return Presentation(std::make_shared<SuccessorLineFamily>(0, false));
  if (auto k = param_of(spec, "succ", "shift"))
    return Presentation(std::make_shared<SuccessorLineFamily>(*k, false));
  if (spec == "succ0")
    return Presentation(std::make_shared<SuccessorLineFamily>(0, true));
  if (spec == "dlo01") return Presentation(std::make_shared<Dlo01Family>());
  if (auto n = param_of(spec, "a_n", "n"))
    return Presentation(
        std::make_shared<IntervalUnionFamily>(static_cast<unsigned>(*n)));
  if (spec == "shuffle")
    return Presentation(std::make_shared<ShuffleFamily>(false));
  if (spec == "shuffle+adj")
    return Presentation(std::make_shared<ShuffleFamily>(true));
  if (spec.rfind("pullback:", 0) == 0) {
    std::string rest = spec.substr(9);
    auto cut = rest.rfind(':');
    if (cut == std::string::npos)
      throw FormulaError("pullback spec needs base and pairs: " + spec);
    Presentation base = make_builtin(rest.substr(0, cut));
    std::map<uint64_t, uint64_t> pairs;
    std::istringstream ss(rest.substr(cut + 1));
    std::string item;
    while (std::getline(ss, item, ',')) {
      auto eq = item.find('=');
      if (eq == std::string::npos)
        throw FormulaError("pullback pair must be i=j: " + item);
      pairs[parse_nat(item.substr(0, eq))] = parse_nat(item.substr(eq + 1));
    }
    return pullback(base, Permutation::fin_supp(std::move(pairs)));
  }
  throw FormulaError("unknown presentation: " + spec);
}

std::vector<std::string> builtin_presentation_names() {
  return {"succ",    "succ:shift=<k>", "succ0",       "dlo01",
          "a_n:n=<k>", "shuffle",      "shuffle+adj", "pullback:<base>:<i=j,...>"};
}

}  // namespace eldec
