#include <algorithm>

#include "eldec/decider.hpp"

namespace eldec {

namespace {

/// Quantifier-free evaluation against an atomic-diagram oracle. Named
/// constants resolve through their marker relation (or an explicit
/// binding); unary functions resolve by searching the graph relation.
/// Every oracle access costs a step.
struct Eval {
  DiagramOracle& o;
  const std::vector<std::pair<std::string, std::string>>* const_rels;
  std::map<std::string, uint64_t> consts;  // resolved/bound named constants
  uint64_t& steps;
  uint64_t max_steps;

  void tick() {
    if (++steps > max_steps) throw StepsExhausted("step budget exhausted");
  }

  bool rel_query(const std::string& rel, const std::vector<uint64_t>& idx) {
    tick();
    std::vector<Term> ts;
    ts.reserve(idx.size());
    for (uint64_t i : idx) ts.push_back(Term::dom_const(i));
    return o.query(encode_atomic(o.signature(), mk_atom(rel, ts)));
  }

  bool eq_query(uint64_t i, uint64_t j) {
    if (i == j) return true;
    tick();
    return o.query(encode_atomic(
        o.signature(),
        mk_eq(Term::dom_const(std::min(i, j)), Term::dom_const(std::max(i, j)))));
  }

  uint64_t named(const std::string& name) {
    auto it = consts.find(name);
    if (it != consts.end()) return it->second;
    std::string rel;
    if (const_rels)
      for (const auto& [n, r] : *const_rels)
        if (n == name) rel = r;
    if (rel.empty())
      throw FormulaError("no interpretation for constant " + name);
    for (uint64_t j = 0;; ++j)
      if (rel_query(rel, {j})) {
        consts[name] = j;
        return j;
      }
  }

  uint64_t term_value(const Term& t, const std::map<std::string, uint64_t>& env) {
    switch (t.kind) {
      case Term::Kind::Var: {
        auto it = env.find(t.name);
        if (it == env.end()) throw FormulaError("unbound variable " + t.name);
        return it->second;
      }
      case Term::Kind::DomConst:
        return t.index;
      case Term::Kind::NamedConst:
        return named(t.name);
      case Term::Kind::App: {
        if (t.args.empty()) return named(t.name);
        if (t.args.size() != 1)
          throw FormulaError("only unary functions are supported: " + t.name);
        uint64_t a = term_value(t.args[0], env);
        for (uint64_t j = 0;; ++j)
          if (rel_query(t.name, {a, j})) return j;
      }
    }
    throw FormulaError("bad term");
  }

  bool eval(const FormulaPtr& f, const std::map<std::string, uint64_t>& env) {
    switch (f->kind) {
      case Formula::Kind::True:
        return true;
      case Formula::Kind::False:
        return false;
      case Formula::Kind::Eq:
        return eq_query(term_value(f->terms[0], env), term_value(f->terms[1], env));
      case Formula::Kind::Atom: {
        std::vector<uint64_t> idx;
        for (const Term& t : f->terms) idx.push_back(term_value(t, env));
        return rel_query(f->sym, idx);
      }
      case Formula::Kind::Not:
        return !eval(f->lhs, env);
      case Formula::Kind::And:
        return eval(f->lhs, env) && eval(f->rhs, env);
      case Formula::Kind::Or:
        return eval(f->lhs, env) || eval(f->rhs, env);
      case Formula::Kind::Implies:
        return !eval(f->lhs, env) || eval(f->rhs, env);
      default:
        throw FormulaError("matrix evaluation expects quantifier-free input");
    }
  }
};

/// Witness tuples of width m in max-then-lex order (all tuples whose
/// maximum is v, for v = 0,1,2,…, each group lexicographically).
struct TupleGen {
  unsigned m;
  uint64_t maxv = 0;
  std::vector<uint64_t> cur;
  bool done_single = false;

  explicit TupleGen(unsigned width) : m(width) {}

  bool next(std::vector<uint64_t>& out) {
    if (m == 0) {
      if (done_single) return false;
      done_single = true;
      out.clear();
      return true;
    }
    while (true) {
      if (cur.empty()) {
        cur.assign(m, 0);
      } else {
        unsigned i = m;
        while (i > 0) {
          --i;
          if (cur[i] < maxv) {
            ++cur[i];
            for (unsigned j = i + 1; j < m; ++j) cur[j] = 0;
            break;
          }
          if (i == 0) {
            ++maxv;
            cur.assign(m, 0);
          }
        }
      }
      if (std::find(cur.begin(), cur.end(), maxv) != cur.end()) {
        out = cur;
        return true;
      }
    }
  }
};

Verdict decide_with_pair(const QEPair& pr, DiagramOracle& oracle,
                         const std::vector<std::pair<std::string, std::string>>*
                             const_rels,
                         const ConstBinding& binding, uint64_t& steps,
                         uint64_t max_steps, DecisionTrace* trace) {
  Eval ev{oracle, const_rels, {}, steps, max_steps};
  for (const auto& [name, el] : binding) ev.consts[name] = el;
  if (trace) {
    trace->alpha = pr.alpha;
    trace->beta = pr.beta;
    trace->yvars = pr.yvars;
  }
  auto finish = [&](Verdict v, const std::vector<uint64_t>& w, char which) {
    if (trace) {
      trace->witness = w;
      trace->witness_matrix = which;
      trace->queries = oracle.log();
      trace->use = oracle.use();
      trace->steps = steps;
    }
    return v;
  };
  try {
    TupleGen gen(static_cast<unsigned>(pr.yvars.size()));
    std::vector<uint64_t> b;
    while (gen.next(b)) {
      std::map<std::string, uint64_t> env;
      for (size_t i = 0; i < pr.yvars.size(); ++i) env[pr.yvars[i]] = b[i];
      if (!ev.eval(pr.alpha, env)) return finish(Verdict::False, b, 'a');
      if (!ev.eval(pr.beta, env)) return finish(Verdict::True, b, 'b');
      ev.tick();  // one dovetail round
    }
    // width 0 with both matrices true: the oracle string is not the
    // diagram of a model — the idealized search runs forever
    return finish(Verdict::Timeout, {}, 0);
  } catch (const StepsExhausted&) {
    return finish(Verdict::Timeout, {}, 0);
  }
}

}  // namespace

Verdict decide_mc(const TheoryDescriptor& t, DiagramOracle& oracle,
                  const FormulaPtr& sentence, uint64_t max_steps,
                  DecisionTrace* trace, const ConstBinding& binding) {
  if (!t.model_complete || !t.qe_pair)
    throw FormulaError("theory " + t.id +
                       " is not model complete: decision refused");
  if (!free_vars(sentence).empty())
    throw FormulaError("decide_mc expects a sentence");
  QEPair pr = qe_universal_pair(t, sentence);
  uint64_t steps = 0;
  return decide_with_pair(pr, oracle, &t.const_relations, binding, steps,
                          max_steps, trace);
}

Verdict decide_mc(const TheoryDescriptor& t, const Presentation& p,
                  const FormulaPtr& sentence, uint64_t max_steps,
                  DecisionTrace* trace) {
  PresentationOracle o(p);
  return decide_mc(t, o, sentence, max_steps, trace);
}

Verdict decide_succ_nonuniform(DiagramOracle& o, const FormulaPtr& sentence,
                               uint64_t max_steps, DecisionTrace* trace,
                               unsigned stable_doublings) {
  uint64_t steps = 0;
  Eval ev{o, nullptr, {}, steps, max_steps};
  uint64_t z = 0;
  try {
    uint64_t w = 1;
    uint64_t last = UINT64_MAX;  // sentinel: no stable candidate yet
    unsigned stable = 0;
    for (;;) {
      std::vector<uint64_t> cands;
      for (uint64_t i = 0; i <= w; ++i) {
        // predecessors are sought a fixed margin beyond the window, so a
        // candidate whose predecessor sits just outside is not kept alive
        bool has_pred = false;
        for (uint64_t j = 0; j <= w + 2 && !has_pred; ++j)
          if (ev.rel_query("S", {j, i})) has_pred = true;
        if (!has_pred) cands.push_back(i);
      }
      if (cands.size() == 1) {
        if (last == cands[0]) {
          ++stable;
        } else {
          last = cands[0];
          stable = 1;
        }
        if (stable >= stable_doublings) {
          z = cands[0];
          break;
        }
      } else {
        last = UINT64_MAX;
        stable = 0;
      }
      w *= 2;
    }
  } catch (const StepsExhausted&) {
    if (trace) {
      trace->queries = o.log();
      trace->use = o.use();
      trace->steps = steps;
    }
    return Verdict::Timeout;
  }
  if (trace) trace->least_element = z;
  QEPair pr = qe_universal_pair(theory("succ0"), sentence);
  return decide_with_pair(pr, o, nullptr, {{"zero", z}}, steps, max_steps,
                          trace);
}

Verdict decide_succ_nonuniform(const Presentation& p, const FormulaPtr& sentence,
                               uint64_t max_steps, DecisionTrace* trace,
                               unsigned stable_doublings) {
  PresentationOracle o(p);
  return decide_succ_nonuniform(o, sentence, max_steps, trace,
                                stable_doublings);
}

Functional as_functional(const TheoryDescriptor& t) {
  const TheoryDescriptor* tp = &theory(t.id);  // registry storage is stable
  Functional fn;
  fn.id = "decider:" + tp->id;
  fn.sentence_sig = tp->surface_sig;
  fn.diagram_sig = tp->diagram_sig;
  fn.program_text =
      "on input e (a sentence code) with oracle X: decode the sentence s "
      "from e; compute the universal pair (alpha, beta) for s under theory " +
      tp->id +
      "; dovetail witness tuples in max-then-lex order, evaluating both "
      "matrices by querying atomic codes of X only; output 0 when alpha "
      "acquires a counterexample, 1 when beta does; the use is the largest "
      "queried code plus one";
  fn.run = [tp](const std::vector<bool>& prefix, uint64_t sentence_code,
                uint64_t max_steps) -> FunctionalRun {
    FunctionalRun r;
    PrefixOracle o(tp->diagram_sig, prefix);
    auto harvest = [&] {
      r.queries = o.log();
      r.use = o.use();
    };
    try {
      FormulaPtr s = sentence_at(tp->surface_sig, sentence_code);
      DecisionTrace tr;
      Verdict v = decide_mc(*tp, o, s, max_steps, &tr);
      r.steps = tr.steps;
      harvest();
      if (v != Verdict::Timeout) {
        r.converged = true;
        r.bit = v == Verdict::True ? 1 : 0;
      }
    } catch (const OracleGap&) {
      harvest();
    } catch (const FormulaError&) {
      harvest();
    }
    return r;
  };
  return fn;
}

std::vector<bool> pullback_prefix(const Presentation& c_pres,
                                  const std::vector<uint64_t>& rho) {
  if (rho.empty()) return {};
  const Signature& sig = c_pres.signature();
  uint64_t n = rho.size() - 1;
  uint64_t len = block_length(sig, n);
  std::vector<bool> bits(len);
  for (uint64_t code = 0; code < len; ++code) {
    FormulaPtr atom = decode_atomic(sig, code);
    std::vector<uint64_t> mapped;
    for (const Term& t : atom->terms) mapped.push_back(rho.at(t.index));
    if (atom->kind == Formula::Kind::Eq) {
      bits[code] = mapped[0] == mapped[1];
    } else {
      std::vector<Term> ts;
      for (uint64_t i : mapped) ts.push_back(Term::dom_const(i));
      bits[code] = c_pres.query(encode_atomic(sig, mk_atom(atom->sym, ts)));
    }
  }
  return bits;
}

LocalEvidence local_search_decide(const Functional& phi_e,
                                  const Presentation& c_pres,
                                  const Condition& p, const FormulaPtr& phi,
                                  const std::vector<uint64_t>& c,
                                  uint64_t max_steps) {
  LocalEvidence ev;
  auto scode = sentence_code(phi_e.sentence_sig, phi, 1 + max_steps / 4);
  if (!scode) return ev;
  uint64_t n_min = p.size() ? p.size() - 1 : 0;
  for (uint64_t ci : c) n_min = std::max(n_min, ci);
  for (uint64_t dc : dom_consts(phi)) n_min = std::max(n_min, dc);

  for (uint64_t n = n_min;; ++n) {
    // rho on 0..n: positions below |p| follow p, positions in c are
    // fixed, the rest range over small values injectively (lex order, so
    // the identity-like completion comes first)
    std::vector<int64_t> fixed(n + 1, -1);
    for (size_t i = 0; i < p.size(); ++i) fixed[i] = (int64_t)p.map[i];
    bool clash = false;
    for (uint64_t ci : c) {
      if (fixed[ci] >= 0 && fixed[ci] != (int64_t)ci) clash = true;
      fixed[ci] = (int64_t)ci;
    }
    if (clash) return ev;
    std::vector<size_t> free_pos;
    for (uint64_t i = 0; i <= n; ++i)
      if (fixed[i] < 0) free_pos.push_back(i);
    uint64_t vmax = n + free_pos.size() + 2;

    std::vector<uint64_t> choice(free_pos.size(), 0);
    bool more = true;
    bool first = true;
    while (more) {
      if (!first) {
        if (free_pos.empty()) break;
        size_t i = choice.size();
        for (;;) {
          if (i == 0) {
            more = false;
            break;
          }
          --i;
          if (choice[i] < vmax) {
            ++choice[i];
            for (size_t j = i + 1; j < choice.size(); ++j) choice[j] = 0;
            break;
          }
        }
        if (!more) break;
      }
      first = false;
      std::vector<uint64_t> rho(n + 1);
      std::set<uint64_t> used;
      bool ok = true;
      for (uint64_t i = 0; i <= n; ++i)
        if (fixed[i] >= 0) {
          rho[i] = (uint64_t)fixed[i];
          if (!used.insert(rho[i]).second) ok = false;
        }
      for (size_t k = 0; k < free_pos.size() && ok; ++k) {
        rho[free_pos[k]] = choice[k];
        if (!used.insert(choice[k]).second) ok = false;
      }
      if (!ok) continue;

      std::vector<bool> sigma = pullback_prefix(c_pres, rho);
      ev.steps += sigma.size();
      if (ev.steps > max_steps) return ev;
      FunctionalRun run = phi_e.run(sigma, *scode, max_steps - ev.steps);
      ev.steps += run.steps ? run.steps : 1;
      if (run.converged) {
        ev.found = true;
        ev.bit = run.bit;
        ev.n = n;
        ev.sigma = std::move(sigma);
        ev.b = std::move(rho);
        return ev;
      }
      if (ev.steps > max_steps) return ev;
    }
  }
}

}  // namespace eldec
