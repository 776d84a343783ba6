#include <algorithm>

#include "eldec/sigma1.hpp"

namespace eldec {

namespace {

// Free variables must be x0..xn; returns n.
unsigned var_span(const FormulaPtr& alpha) {
  std::set<std::string> fv = free_vars(alpha);
  if (fv.empty()) throw FormulaError("expected free variables x0..xn");
  std::set<unsigned> idx;
  for (const auto& v : fv) {
    if (v.size() < 2 || v[0] != 'x')
      throw FormulaError("free variables must be named x0..xn, got " + v);
    idx.insert(static_cast<unsigned>(std::stoul(v.substr(1))));
  }
  unsigned n = *idx.rbegin();
  for (unsigned i = 0; i <= n; ++i)
    if (!idx.count(i))
      throw FormulaError("free variables must be contiguous x0..xn");
  return n;
}

FormulaPtr close_with_constants(const FormulaPtr& alpha, unsigned n) {
  std::vector<std::pair<std::string, Term>> subs;
  for (unsigned i = 0; i <= n; ++i)
    subs.emplace_back("x" + std::to_string(i), Term::dom_const(i));
  return substitute(alpha, subs);
}

constexpr uint64_t kMaxCandidatesLog2 = 18;
constexpr uint64_t kSentenceCodeLimit = 60000;

}  // namespace

HAlphaEnumerator enumerate_H_alpha(const Functional& gamma,
                                   const FormulaPtr& alpha, uint64_t stage,
                                   bool prune_equality) {
  HAlphaEnumerator en;
  en.gamma = gamma;
  en.alpha = alpha;
  en.n = var_span(alpha);
  en.stage = stage;
  en.prune_equality = prune_equality;
  en.alpha_code =
      sentence_code(gamma.sentence_sig, close_with_constants(alpha, en.n),
                    kSentenceCodeLimit);
  if (!en.alpha_code) return en;

  const Signature& sig = gamma.diagram_sig;
  for (uint64_t m = 0; m <= stage; ++m) {
    uint64_t len = block_length(sig, m);
    std::vector<uint64_t> free_bits;
    for (uint64_t code = 0; code < len; ++code) {
      if (prune_equality &&
          decode_atomic(sig, code)->kind == Formula::Kind::Eq)
        continue;
      free_bits.push_back(code);
    }
    if (free_bits.size() > kMaxCandidatesLog2) break;  // desk-scale cut
    uint64_t total = uint64_t{1} << free_bits.size();
    for (uint64_t mask = 0; mask < total; ++mask) {
      std::vector<bool> sigma(len, false);
      for (size_t b = 0; b < free_bits.size(); ++b)
        sigma[free_bits[b]] = (mask >> b) & 1;
      FunctionalRun r = gamma.run(sigma, *en.alpha_code, stage);
      if (r.converged && r.bit == 1) en.found.push_back({std::move(sigma), m});
    }
  }
  return en;
}

Sigma1Approx beta_alpha(const HAlphaEnumerator& en) {
  Sigma1Approx ap;
  ap.n = en.n;
  ap.stage = en.stage;
  const Signature& sig = en.gamma.diagram_sig;
  for (const HAlphaEntry& e : en.found) {
    FormulaPtr g = gamma_sigma(sig, e.sigma);
    std::vector<std::pair<uint64_t, Term>> ren;
    Sigma1Disjunct d;
    d.m = e.m;
    d.sigma = e.sigma;
    for (uint64_t i = 0; i <= e.m; ++i) {
      std::string v =
          (i <= en.n ? "x" : "y") + std::to_string(i);
      ren.emplace_back(i, Term::var(v));
      if (i > en.n) d.ys.push_back(v);
    }
    d.matrix = substitute_dom_consts(g, ren);
    ap.disjuncts.push_back(std::move(d));
  }
  return ap;
}

bool eval_ground(const Presentation& p, const FormulaPtr& f) {
  switch (f->kind) {
    case Formula::Kind::True:
      return true;
    case Formula::Kind::False:
      return false;
    case Formula::Kind::Eq: {
      const Term &a = f->terms[0], &b = f->terms[1];
      if (a.kind != Term::Kind::DomConst || b.kind != Term::Kind::DomConst)
        throw FormulaError("eval_ground expects constant terms");
      return a.index == b.index;
    }
    case Formula::Kind::Atom:
      return p.query(encode_atomic(p.signature(), f));
    case Formula::Kind::Not:
      return !eval_ground(p, f->lhs);
    case Formula::Kind::And:
      return eval_ground(p, f->lhs) && eval_ground(p, f->rhs);
    case Formula::Kind::Or:
      return eval_ground(p, f->lhs) || eval_ground(p, f->rhs);
    case Formula::Kind::Implies:
      return !eval_ground(p, f->lhs) || eval_ground(p, f->rhs);
    default:
      throw FormulaError("eval_ground expects a quantifier-free sentence");
  }
}

namespace {

// Flatten a conjunction into its literals; false when a non-conjunctive
// node is met (then the caller falls back to ground substitution).
bool flatten_conjunction(const FormulaPtr& f, std::vector<FormulaPtr>& out) {
  if (f->kind == Formula::Kind::And)
    return flatten_conjunction(f->lhs, out) &&
           flatten_conjunction(f->rhs, out);
  switch (f->kind) {
    case Formula::Kind::Atom:
    case Formula::Kind::Eq:
    case Formula::Kind::True:
    case Formula::Kind::False:
      out.push_back(f);
      return true;
    case Formula::Kind::Not:
      if (f->lhs->kind == Formula::Kind::Atom ||
          f->lhs->kind == Formula::Kind::Eq) {
        out.push_back(f);
        return true;
      }
      return false;
    default:
      return false;
  }
}

using Env = std::map<std::string, uint64_t>;

std::optional<uint64_t> term_value(const Term& t, const Env& env) {
  if (t.kind == Term::Kind::DomConst) return t.index;
  if (t.kind == Term::Kind::Var) {
    auto it = env.find(t.name);
    if (it == env.end()) return std::nullopt;
    return it->second;
  }
  throw FormulaError("matrix terms must be variables or domain constants");
}

// Evaluate a literal under a partial assignment: nullopt while some of
// its variables are unassigned.
std::optional<bool> literal_value(const Presentation& p, const FormulaPtr& lit,
                                  const Env& env) {
  if (lit->kind == Formula::Kind::Not) {
    auto b = literal_value(p, lit->lhs, env);
    if (!b) return std::nullopt;
    return !*b;
  }
  if (lit->kind == Formula::Kind::True) return true;
  if (lit->kind == Formula::Kind::False) return false;
  std::vector<uint64_t> vals;
  for (const Term& t : lit->terms) {
    auto v = term_value(t, env);
    if (!v) return std::nullopt;
    vals.push_back(*v);
  }
  if (lit->kind == Formula::Kind::Eq) return vals[0] == vals[1];
  std::vector<Term> ts;
  for (uint64_t v : vals) ts.push_back(Term::dom_const(v));
  return p.query(encode_atomic(p.signature(), mk_atom(lit->sym, ts)));
}

// Depth-first witness search: extend the assignment one y at a time,
// checking each literal as soon as its variables are all bound.
bool witness_search(const Presentation& p,
                    const std::vector<FormulaPtr>& literals,
                    const std::vector<std::string>& ys, size_t next, Env& env,
                    uint64_t witness_bound) {
  for (const FormulaPtr& lit : literals) {
    auto b = literal_value(p, lit, env);
    if (b && !*b) return false;
  }
  if (next == ys.size()) {
    for (const FormulaPtr& lit : literals)
      if (!literal_value(p, lit, env).value()) return false;
    return true;
  }
  for (uint64_t w = 0; w < witness_bound; ++w) {
    env[ys[next]] = w;
    if (witness_search(p, literals, ys, next + 1, env, witness_bound))
      return true;
  }
  env.erase(ys[next]);
  return false;
}

}  // namespace

Sigma1Result eval_sigma1_bounded(const Presentation& p,
                                 const Sigma1Approx& approx,
                                 const std::vector<uint64_t>& a,
                                 uint64_t witness_bound) {
  if (a.size() != approx.n + 1)
    throw FormulaError("tuple arity mismatch for the approximant");
  for (const Sigma1Disjunct& d : approx.disjuncts) {
    Env env;
    for (unsigned i = 0; i <= approx.n; ++i) env["x" + std::to_string(i)] = a[i];
    std::vector<FormulaPtr> literals;
    if (flatten_conjunction(d.matrix, literals)) {
      if (witness_search(p, literals, d.ys, 0, env, witness_bound))
        return Sigma1Result::True;
      continue;
    }
    // non-conjunctive matrix: ground it tuple by tuple
    std::vector<std::pair<std::string, Term>> base;
    for (unsigned i = 0; i <= approx.n; ++i)
      base.emplace_back("x" + std::to_string(i), Term::dom_const(a[i]));
    FormulaPtr fixed = substitute(d.matrix, base);
    size_t k = d.ys.size();
    std::vector<uint64_t> w(k, 0);
    for (;;) {
      std::vector<std::pair<std::string, Term>> ws;
      for (size_t i = 0; i < k; ++i)
        ws.emplace_back(d.ys[i], Term::dom_const(w[i]));
      if (eval_ground(p, k ? substitute(fixed, ws) : fixed))
        return Sigma1Result::True;
      if (k == 0) break;
      size_t i = k;
      while (i > 0) {
        --i;
        if (++w[i] < witness_bound) break;
        w[i] = 0;
        if (i == 0) goto next_disjunct;
      }
    }
  next_disjunct:;
  }
  return Sigma1Result::Unknown;
}

std::vector<std::pair<EqualityCase, Sigma1Approx>> sigma1_form(
    const Functional& gamma, const FormulaPtr& alpha, uint64_t stage) {
  unsigned n = var_span(alpha);
  std::vector<std::string> vars;
  for (unsigned i = 0; i <= n; ++i) vars.push_back("x" + std::to_string(i));
  std::vector<std::pair<EqualityCase, Sigma1Approx>> out;
  for (EqualityCase ec : expand_equality_cases(alpha, vars)) {
    // reduce to class representatives: pattern entries are the class
    // numbers in first-occurrence order, so x_{pattern[i]} is contiguous
    std::vector<std::pair<std::string, Term>> subs;
    for (unsigned i = 0; i <= n; ++i)
      subs.emplace_back(vars[i],
                        Term::var("x" + std::to_string(ec.pattern[i])));
    FormulaPtr reduced = substitute(alpha, subs);
    out.emplace_back(std::move(ec),
                     beta_alpha(enumerate_H_alpha(gamma, reduced, stage)));
  }
  return out;
}

Sigma1Result eval_sigma1_general(
    const Presentation& p,
    const std::vector<std::pair<EqualityCase, Sigma1Approx>>& cases,
    const std::vector<uint64_t>& a, uint64_t witness_bound) {
  for (const auto& [ec, ap] : cases) {
    // the tuple must realize exactly this identification pattern
    bool match = true;
    for (size_t i = 0; i < a.size() && match; ++i)
      for (size_t j = i + 1; j < a.size() && match; ++j)
        if ((a[i] == a[j]) != (ec.pattern[i] == ec.pattern[j])) match = false;
    if (!match) continue;
    std::vector<uint64_t> reduced;
    unsigned classes =
        *std::max_element(ec.pattern.begin(), ec.pattern.end()) + 1;
    reduced.resize(classes);
    for (size_t i = 0; i < a.size(); ++i) reduced[ec.pattern[i]] = a[i];
    return eval_sigma1_bounded(p, ap, reduced, witness_bound);
  }
  return Sigma1Result::Unknown;
}

}  // namespace eldec
