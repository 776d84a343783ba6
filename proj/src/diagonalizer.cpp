#include "eldec/diagonalizer.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>
#include <unordered_set>

#include "eldec/sentences.hpp"

namespace eldec {

namespace {

uint64_t norm_of(const std::vector<uint64_t>& q) {
  uint64_t n = q.size();
  for (uint64_t v : q) n = std::max(n, v + 1);
  return n;
}

bool is_prefix(const std::vector<uint64_t>& a, const std::vector<uint64_t>& b) {
  if (a.size() > b.size()) return false;
  return std::equal(a.begin(), a.end(), b.begin());
}

std::string key_of(const std::vector<uint64_t>& q) {
  std::ostringstream os;
  for (uint64_t v : q) os << v << ',';
  return os.str();
}

}  // namespace

bool prec_less(const std::vector<uint64_t>& a, const std::vector<uint64_t>& b) {
  uint64_t na = norm_of(a), nb = norm_of(b);
  if (na != nb) return na < nb;
  if (a.size() != b.size()) return a.size() < b.size();
  return a < b;
}

ExtensionEnumerator::ExtensionEnumerator(std::vector<uint64_t> stem)
    : stem_(std::move(stem)), next_norm_(norm_of(stem_)) {
  cache_.push_back(stem_);
}

void ExtensionEnumerator::grow() {
  uint64_t n = next_norm_++;
  // Suffix entries are drawn from {0..n-1} minus the stem's values,
  // injectively, lengths ascending then lex, keeping norm exactly n.
  std::vector<uint64_t> avail;
  for (uint64_t v = 0; v < n; ++v)
    if (std::find(stem_.begin(), stem_.end(), v) == stem_.end())
      avail.push_back(v);
  size_t max_suffix = n > stem_.size() ? n - stem_.size() : 0;
  for (size_t len = 0; len <= std::min(max_suffix, avail.size()); ++len) {
    std::vector<uint64_t> suffix;
    std::vector<bool> used(avail.size(), false);
    auto rec = [&](auto&& self, size_t depth) -> void {
      if (depth == len) {
        std::vector<uint64_t> q = stem_;
        q.insert(q.end(), suffix.begin(), suffix.end());
        if (norm_of(q) == n && q != stem_) cache_.push_back(q);
        return;
      }
      for (size_t i = 0; i < avail.size(); ++i) {
        if (used[i]) continue;
        used[i] = true;
        suffix.push_back(avail[i]);
        self(self, depth + 1);
        suffix.pop_back();
        used[i] = false;
      }
    };
    rec(rec, 0);
  }
}

const std::vector<uint64_t>& ExtensionEnumerator::at(size_t rank) {
  while (cache_.size() <= rank) grow();
  return cache_[rank];
}

namespace {

constexpr uint64_t kStepCap = 40;  // per-run step cap once stages pass it

// Per-construction memo pools. Runs are only memoized at the fixed cap,
// so a cached result is exact, not budget-truncated.
struct Memos {
  const Presentation& a;
  const std::vector<Functional>& fns;
  std::map<std::string, std::vector<bool>> prefixes;
  std::map<uint64_t, FormulaPtr> sentences;         // surface-sig decodes
  std::map<uint64_t, std::vector<uint64_t>> consts;  // sorted dom consts
  std::vector<std::map<std::pair<std::string, uint64_t>, FunctionalRun>> runs;
  std::map<std::string, bool> truths;

  explicit Memos(const Presentation& a_, const std::vector<Functional>& f)
      : a(a_), fns(f), runs(f.size()) {}

  const std::vector<bool>& prefix_of(const std::vector<uint64_t>& q) {
    auto k = key_of(q);
    auto it = prefixes.find(k);
    if (it != prefixes.end()) return it->second;
    return prefixes.emplace(k, pullback_prefix(a, q)).first->second;
  }

  // All functionals in the registry share one sentence numbering; decode
  // through the first one's signature.
  const FormulaPtr& sentence_of(uint64_t code) {
    auto it = sentences.find(code);
    if (it != sentences.end()) return it->second;
    FormulaPtr s = sentence_at(fns.front().sentence_sig, code);
    auto cs = dom_consts(s);
    consts.emplace(code, std::vector<uint64_t>(cs.begin(), cs.end()));
    return sentences.emplace(code, std::move(s)).first->second;
  }

  const std::vector<uint64_t>& consts_of(uint64_t code) {
    sentence_of(code);
    return consts.at(code);
  }

  FunctionalRun run(size_t e, const std::vector<uint64_t>& q, uint64_t code,
                    uint64_t cap) {
    if (cap != kStepCap)
      return fns[e].run(prefix_of(q), code, cap);
    auto key = std::make_pair(key_of(q), code);
    auto it = runs[e].find(key);
    if (it != runs[e].end()) return it->second;
    FunctionalRun r = fns[e].run(prefix_of(q), code, cap);
    runs[e].emplace(std::move(key), r);
    return r;
  }

  // Truth in the base structure of the sentence with its constants
  // renamed through q; keyed on the code and the renamed values only.
  bool truth(uint64_t code, const std::vector<uint64_t>& q) {
    const auto& cs = consts_of(code);
    std::ostringstream os;
    os << code;
    for (uint64_t c : cs) os << ':' << q[c];
    auto k = os.str();
    auto it = truths.find(k);
    if (it != truths.end()) return it->second;
    std::vector<std::pair<uint64_t, Term>> sub;
    for (uint64_t c : cs) sub.emplace_back(c, Term::dom_const(q[c]));
    bool t = classical_truth(a, substitute_dom_consts(sentence_of(code), sub));
    return truths.emplace(std::move(k), t).first->second;
  }
};

// Incremental scan state for one lowness requirement over a fixed base.
struct LowState {
  size_t scanned = 0;
  bool found = false;
  std::vector<uint64_t> q;
};

// Incremental scan state for one defeat requirement over a fixed base.
struct DefState {
  size_t ranks = 0;       // extension ranks < ranks scanned
  uint64_t codes = 0;     // sentence codes <= codes scanned (once any)
  bool started = false;
  bool any_conv = false;
  std::vector<std::vector<uint64_t>> convergent;
  bool has_dis = false;
  std::pair<size_t, uint64_t> dis_key{};  // (rank, code), lexicographic
  DefeatEvidence dis;
};

void scan_low(LowState& st, ExtensionEnumerator& ext, Memos& mm, size_t e,
              size_t breadth, uint64_t cap) {
  while (!st.found && st.scanned < breadth) {
    const auto& q = ext.at(st.scanned++);
    FunctionalRun r = mm.run(e, q, e, cap);
    if (r.converged) {
      st.found = true;
      st.q = q;
    }
  }
}

void scan_def(DefState& st, ExtensionEnumerator& ext, Memos& mm, size_t e,
              size_t breadth, uint64_t code_bound, uint64_t cap) {
  auto inspect = [&](size_t rank, uint64_t code) {
    const auto& q = ext.at(rank);
    const auto& cs = mm.consts_of(code);
    if (!cs.empty() && cs.back() >= q.size()) return;
    FunctionalRun r = mm.run(e, q, code, cap);
    if (!r.converged) return;
    if (st.convergent.empty() || st.convergent.back() != q)
      st.convergent.push_back(q);
    st.any_conv = true;
    bool t = mm.truth(code, q);
    if (r.bit != (t ? 1 : 0)) {
      std::pair<size_t, uint64_t> key{rank, code};
      if (!st.has_dis || key < st.dis_key) {
        st.has_dis = true;
        st.dis_key = key;
        st.dis.kind = DefeatEvidence::Kind::Disagreement;
        st.dis.functional = e;
        st.dis.q = q;
        st.dis.sentence = code;
        st.dis.output = r.bit;
        st.dis.truth = t;
        st.dis.budget = cap;
      }
    }
  };
  size_t old_ranks = st.ranks;
  uint64_t old_codes = st.codes;
  bool started = st.started;
  for (size_t rank = 0; rank < breadth; ++rank)
    for (uint64_t code = 0; code <= code_bound; ++code) {
      if (started && rank < old_ranks && code <= old_codes) continue;
      inspect(rank, code);
    }
  st.ranks = std::max(st.ranks, breadth);
  st.codes = std::max(st.codes, code_bound);
  st.started = true;
}

// Least string extending base that no observed convergent string extends.
std::vector<uint64_t> avoid(const std::vector<std::vector<uint64_t>>& conv,
                            ExtensionEnumerator& ext) {
  for (size_t rank = 0;; ++rank) {
    const auto& p = ext.at(rank);
    bool hit = false;
    for (const auto& q : conv)
      if (is_prefix(p, q)) {
        hit = true;
        break;
      }
    if (!hit) return p;
  }
}

}  // namespace

DefeatEvidence case_search(const Presentation& a,
                           const std::vector<uint64_t>& stem,
                           const Functional& phi, size_t functional_index,
                           uint64_t budget) {
  std::vector<Functional> fns{phi};
  Memos mm(a, fns);
  ExtensionEnumerator ext(stem);
  DefState st;
  scan_def(st, ext, mm, 0, budget, budget, budget);
  if (st.has_dis) {
    DefeatEvidence ev = st.dis;
    ev.functional = functional_index;
    ev.budget = budget;
    return ev;
  }
  DefeatEvidence ev;
  ev.functional = functional_index;
  ev.budget = budget;
  if (!st.any_conv) {
    ev.kind = DefeatEvidence::Kind::Case3;
    ev.q = stem;
    ev.input = 0;
  } else {
    ev.kind = DefeatEvidence::Kind::Unresolved;
  }
  return ev;
}

bool verify_defeat(const Presentation& a, const Functional& phi,
                   const DefeatEvidence& ev) {
  switch (ev.kind) {
    case DefeatEvidence::Kind::Disagreement: {
      FormulaPtr s;
      try {
        s = sentence_at(phi.sentence_sig, ev.sentence);
      } catch (const FormulaError&) {
        return false;
      }
      auto cs = dom_consts(s);
      for (uint64_t c : cs)
        if (c >= ev.q.size()) return false;
      FunctionalRun r = phi.run(pullback_prefix(a, ev.q), ev.sentence,
                                ev.budget);
      if (!r.converged || r.bit != ev.output) return false;
      std::vector<std::pair<uint64_t, Term>> sub;
      for (uint64_t c : cs) sub.emplace_back(c, Term::dom_const(ev.q[c]));
      bool t = classical_truth(a, substitute_dom_consts(s, sub));
      return t == ev.truth && ev.output != (ev.truth ? 1 : 0);
    }
    case DefeatEvidence::Kind::Case3: {
      // Budget-relative claim, re-checked at double the breadth and cap.
      ExtensionEnumerator ext(ev.q);
      for (size_t rank = 0; rank < 2 * ev.budget + 2; ++rank) {
        FunctionalRun r = phi.run(pullback_prefix(a, ext.at(rank)), ev.input,
                                  2 * ev.budget);
        if (r.converged) return false;
      }
      return true;
    }
    case DefeatEvidence::Kind::Unresolved:
      return true;  // claims nothing
  }
  return false;
}

ConstructionRun run_construction(const Presentation& a,
                                 const std::vector<Functional>& functionals,
                                 uint64_t stages) {
  ConstructionRun out;
  out.stages = stages;
  out.requirements.resize(3 * stages);
  for (uint64_t e = 0; e < stages; ++e) {
    out.requirements[3 * e].kind = ReqKind::Lowness;
    out.requirements[3 * e].index = e;
    out.requirements[3 * e + 1].kind = ReqKind::Surjectivity;
    out.requirements[3 * e + 1].index = e;
    out.requirements[3 * e + 2].kind = ReqKind::Defeat;
    out.requirements[3 * e + 2].index = e;
  }
  out.evidence.resize(functionals.size());
  for (size_t e = 0; e < functionals.size(); ++e) out.evidence[e].functional = e;

  Memos mm(a, functionals);
  std::map<std::string, ExtensionEnumerator> exts;
  auto ext_of = [&](const std::vector<uint64_t>& base) -> ExtensionEnumerator& {
    auto k = key_of(base);
    auto it = exts.find(k);
    if (it != exts.end()) return it->second;
    return exts.emplace(k, ExtensionEnumerator(base)).first->second;
  };
  // Cached scan states, keyed by the base the requirement acts from; a
  // base change (injury) lands on a fresh or previously abandoned state.
  std::vector<std::map<std::string, LowState>> low_states(functionals.size());
  std::vector<std::map<std::string, DefState>> def_states(functionals.size());

  auto touch = [&](RequirementRecord& rec, const std::vector<uint64_t>& chosen,
                   uint64_t stage) {
    if (rec.last_change != 0 && rec.chosen == chosen) return;
    if (rec.last_change != 0)
      out.injuries.push_back({stage, rec.kind, rec.index});
    rec.chosen = chosen;
    rec.last_change = stage;
  };

  for (uint64_t s = 1; s <= stages; ++s) {
    uint64_t cap = std::min<uint64_t>(s, kStepCap);
    out.step_caps.push_back(cap);
    std::vector<uint64_t> p;
    std::unordered_set<uint64_t> range;
    std::vector<uint8_t> low_row(functionals.size(), 0);

    for (uint64_t e = 0; e < s; ++e) {
      // L_e: force convergence of functional e on input e if possible.
      auto& lrec = out.requirements[3 * e];
      if (e < functionals.size()) {
        auto& ext = ext_of(p);
        LowState fresh;
        LowState* st = &fresh;
        if (cap == kStepCap) st = &low_states[e][key_of(p)];
        scan_low(*st, ext, mm, e, s, cap);
        if (st->found) {
          for (size_t i = p.size(); i < st->q.size(); ++i) {
            p.push_back(st->q[i]);
            range.insert(st->q[i]);
          }
          low_row[e] = 1;
          if (!lrec.converged || lrec.chosen != st->q)
            lrec.converged_since = s;
          lrec.converged = true;
          touch(lrec, st->q, s);
        } else {
          lrec.converged = false;
          touch(lrec, p, s);
        }
      }

      // S_e: put e in the range of the map.
      auto& srec = out.requirements[3 * e + 1];
      if (!range.count(e)) {
        p.push_back(e);
        range.insert(e);
      }
      touch(srec, p, s);

      // R_e: hunt for a replayable disagreement; otherwise steer the map
      // away from every extension where convergence was observed.
      auto& rrec = out.requirements[3 * e + 2];
      if (e < functionals.size()) {
        auto& ext = ext_of(p);
        DefState fresh;
        DefState* st = &fresh;
        if (cap == kStepCap) st = &def_states[e][key_of(p)];
        scan_def(*st, ext, mm, e, s, s, cap);
        if (st->has_dis) {
          out.evidence[e] = st->dis;
          const auto& q = st->dis.q;
          for (size_t i = p.size(); i < q.size(); ++i) {
            p.push_back(q[i]);
            range.insert(q[i]);
          }
          touch(rrec, q, s);
        } else {
          out.evidence[e] = DefeatEvidence{};
          out.evidence[e].functional = e;
          out.evidence[e].budget = cap;
          if (!st->any_conv) {
            out.evidence[e].kind = DefeatEvidence::Kind::Case3;
            out.evidence[e].q = p;
            out.evidence[e].input = 0;
          } else {
            out.evidence[e].kind = DefeatEvidence::Kind::Unresolved;
          }
          auto avoided = avoid(st->convergent, ext);
          for (size_t i = p.size(); i < avoided.size(); ++i) {
            p.push_back(avoided[i]);
            range.insert(avoided[i]);
          }
          touch(rrec, p, s);
        }
      }
    }

    out.p_by_stage.push_back(p);
    out.lowness_by_stage.push_back(low_row);
    if (s == stages) out.p_final = p;
  }
  return out;
}

Functional candidate_functional(const std::string& id) {
  const TheoryDescriptor& t = theory("succ");
  if (id == "zero-anchored") {
    Functional f;
    f.id = id;
    f.program_text =
        "assume the diagram lists the successor line in canonical order "
        "(index 0 is the least element and index i+1 succeeds index i); "
        "ignore the oracle and answer by evaluating the sentence in that "
        "assumed copy";
    f.sentence_sig = t.surface_sig;
    f.diagram_sig = t.diagram_sig;
    auto canon = std::make_shared<Presentation>(make_builtin(t.canonical_spec));
    auto memo = std::make_shared<std::map<uint64_t, int>>();
    auto mtx = std::make_shared<std::mutex>();
    f.run = [canon, memo, mtx, sig = t.surface_sig](
                const std::vector<bool>&, uint64_t code,
                uint64_t max_steps) -> FunctionalRun {
      FunctionalRun r;
      if (max_steps == 0) return r;
      std::lock_guard<std::mutex> lk(*mtx);
      auto it = memo->find(code);
      int bit;
      if (it != memo->end()) {
        bit = it->second;
      } else {
        bit = -1;
        try {
          bit = classical_truth(*canon, sentence_at(sig, code)) ? 1 : 0;
        } catch (const FormulaError&) {
        }
        memo->emplace(code, bit);
      }
      r.steps = 1;
      if (bit >= 0) {
        r.converged = true;
        r.bit = bit;
      }
      return r;
    };
    return f;
  }
  if (id == "always-diverge") {
    Functional f;
    f.id = id;
    f.program_text = "loop forever on every input";
    f.sentence_sig = t.surface_sig;
    f.diagram_sig = t.diagram_sig;
    f.run = [](const std::vector<bool>&, uint64_t,
               uint64_t max_steps) -> FunctionalRun {
      FunctionalRun r;
      r.steps = max_steps;
      return r;
    };
    return f;
  }
  if (id == "nonuniform-line") {
    Functional f;
    f.id = id;
    f.program_text =
        "locate the unique predecessor-free element by expanding-window "
        "search over the oracle, then decide the sentence through the "
        "zero-marked theory with the zero constant bound to that element";
    f.sentence_sig = t.surface_sig;
    f.diagram_sig = t.diagram_sig;
    f.run = [dsig = t.diagram_sig, ssig = t.surface_sig](
                const std::vector<bool>& prefix, uint64_t code,
                uint64_t max_steps) -> FunctionalRun {
      FunctionalRun r;
      if (max_steps == 0) return r;
      PrefixOracle o(dsig, prefix);
      auto harvest = [&] {
        r.queries = o.log();
        r.use = o.use();
      };
      try {
        FormulaPtr s = sentence_at(ssig, code);
        DecisionTrace tr;
        Verdict v = decide_succ_nonuniform(o, s, max_steps, &tr);
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
    return f;
  }
  throw std::runtime_error("unknown candidate functional: " + id);
}

std::vector<Functional> candidate_functionals() {
  return {candidate_functional("zero-anchored"),
          candidate_functional("always-diverge"),
          candidate_functional("nonuniform-line")};
}

}  // namespace eldec
