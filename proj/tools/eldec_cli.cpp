// Command-line front end: decide sentences over presented structures,
// extract and evaluate existential equivalents, run the stagewise
// diagonalization, and verify quantifier elimination against the
// classical evaluator. All structured output is JSON; summaries go to
// standard output. Exit codes: 0 true / success, 1 false / mismatch,
// 2 timeout / unknown, 3 usage or error.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <json.hpp>

#include "eldec/diagonalizer.hpp"
#include "eldec/parse.hpp"
#include "eldec/sigma1.hpp"

using json = nlohmann::ordered_json;
using namespace eldec;

namespace {

struct Options {
  uint64_t seed = 0;
  bool quiet = false;
};

void emit(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << j.dump(2) << "\n";
}

void say(const Options& o, const std::string& line) {
  if (!o.quiet) std::cout << line << "\n";
}

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::True: return "true";
    case Verdict::False: return "false";
    default: return "timeout";
  }
}

Functional functional_by_id(const std::string& id) {
  if (id.rfind("decider:", 0) == 0)
    return as_functional(theory(id.substr(8)));
  return candidate_functional(id);
}

std::vector<uint64_t> parse_tuple(const std::string& text) {
  std::vector<uint64_t> out;
  std::istringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stoull(item));
  return out;
}

json evidence_json(const DefeatEvidence& ev, bool verified) {
  json j;
  switch (ev.kind) {
    case DefeatEvidence::Kind::Disagreement: j["kind"] = "disagreement"; break;
    case DefeatEvidence::Kind::Case3: j["kind"] = "case3"; break;
    case DefeatEvidence::Kind::Unresolved: j["kind"] = "unresolved"; break;
  }
  j["functional"] = ev.functional;
  j["q"] = ev.q;
  if (ev.kind == DefeatEvidence::Kind::Disagreement) {
    j["sentence"] = ev.sentence;
    j["output"] = ev.output;
    j["truth"] = ev.truth;
  }
  if (ev.kind == DefeatEvidence::Kind::Case3) j["input"] = ev.input;
  j["budget"] = ev.budget;
  j["verified"] = verified;
  return j;
}

int run_decide(const Options& o, const std::string& tid,
               const std::string& pres, const std::string& text,
               uint64_t max_steps, const std::string& trace_path) {
  const TheoryDescriptor& t = theory(tid);
  Presentation p = make_builtin(pres);
  FormulaPtr s = parse_formula(t.surface_sig, text);
  DecisionTrace tr;
  Verdict v = t.model_complete ? decide_mc(t, p, s, max_steps, &tr)
                               : decide_succ_nonuniform(p, s, max_steps, &tr);
  say(o, std::string("verdict: ") + verdict_name(v) + " (steps " +
             std::to_string(tr.steps) + ", use " + std::to_string(tr.use) +
             ")");
  if (!trace_path.empty()) {
    json j;
    j["seed"] = o.seed;
    j["verdict"] = verdict_name(v);
    j["qe"] = {{"alpha", tr.alpha ? to_string(tr.alpha) : ""},
               {"beta", tr.beta ? to_string(tr.beta) : ""},
               {"m", tr.yvars.size()}};
    j["witness"] = tr.witness;
    if (tr.witness_matrix) j["witness_matrix"] = std::string(1, tr.witness_matrix);
    if (tr.least_element) j["least_element"] = *tr.least_element;
    j["queries"] = tr.queries;
    j["steps"] = tr.steps;
    emit(trace_path, j);
  }
  return v == Verdict::True ? 0 : v == Verdict::False ? 1 : 2;
}

int run_sigma1(const Options& o, const std::string& tid,
               const std::string& alpha_text, uint64_t stage,
               const std::string& eval_spec, uint64_t witness_bound,
               const std::string& out_path) {
  const TheoryDescriptor& t = theory(tid);
  if (!t.model_complete)
    throw std::runtime_error("no uniform decision functional for " + tid);
  Functional gamma = as_functional(t);
  FormulaPtr alpha = parse_formula(t.surface_sig, alpha_text);
  auto cases = sigma1_form(gamma, alpha, stage);
  if (!out_path.empty()) {
    json j;
    j["seed"] = o.seed;
    j["alpha"] = to_string(alpha);
    j["stage"] = stage;
    json pats = json::array();
    for (const auto& [ec, approx] : cases) {
      json pj;
      pj["pattern"] = ec.pattern;
      json ds = json::array();
      for (const auto& d : approx.disjuncts) {
        json dj;
        std::string bits;
        for (bool b : d.sigma) bits += b ? '1' : '0';
        dj["sigma_bits"] = bits;
        dj["m_sigma"] = d.m;
        ds.push_back(dj);
      }
      pj["disjuncts"] = ds;
      pats.push_back(pj);
    }
    j["patterns"] = pats;
    emit(out_path, j);
  }
  say(o, "cases: " + std::to_string(cases.size()));
  if (eval_spec.empty()) return 0;
  auto cut = eval_spec.rfind(':');
  if (cut == std::string::npos)
    throw std::runtime_error("--eval needs <presentation>:<tuple>");
  Presentation p = make_builtin(eval_spec.substr(0, cut));
  std::vector<uint64_t> a = parse_tuple(eval_spec.substr(cut + 1));
  Sigma1Result r = eval_sigma1_general(p, cases, a, witness_bound);
  say(o, r == Sigma1Result::True ? "true" : "unknown");
  return r == Sigma1Result::True ? 0 : 2;
}

int run_diagonalize(const Options& o, const std::string& base,
                    const std::string& fn_list, uint64_t stages,
                    const std::string& out_path) {
  Presentation a = make_builtin(base);
  std::vector<Functional> fns;
  {
    std::istringstream ss(fn_list);
    std::string item;
    while (std::getline(ss, item, ',')) fns.push_back(functional_by_id(item));
  }
  ConstructionRun run = run_construction(a, fns, stages);
  json j;
  j["seed"] = o.seed;
  j["stages"] = run.stages;
  json pf = json::array();
  for (size_t i = 0; i < run.p_final.size(); ++i)
    pf.push_back({i, run.p_final[i]});
  j["p_final"] = pf;
  json reqs = json::array();
  for (const auto& r : run.requirements) {
    json rj;
    rj["kind"] = r.kind == ReqKind::Lowness ? "L"
                 : r.kind == ReqKind::Surjectivity ? "S" : "R";
    rj["e"] = r.index;
    if (r.kind == ReqKind::Lowness)
      rj["status"] = r.converged ? "converged" : "divergent";
    else if (r.kind == ReqKind::Surjectivity)
      rj["status"] = "met";
    else if (r.index < fns.size())
      rj["status"] = evidence_json(run.evidence[r.index], false)["kind"];
    else
      rj["status"] = "inactive";
    rj["stabilized_at"] = r.last_change;
    reqs.push_back(rj);
  }
  j["requirements"] = reqs;
  json evs = json::array();
  size_t verified = 0;
  for (const auto& ev : run.evidence) {
    bool ok = verify_defeat(a, fns[ev.functional], ev);
    if (ok) ++verified;
    evs.push_back(evidence_json(ev, ok));
  }
  j["evidence"] = evs;
  json injs = json::array();
  for (const auto& inj : run.injuries)
    injs.push_back({{"stage", inj.stage},
                    {"kind", inj.kind == ReqKind::Lowness ? "L"
                             : inj.kind == ReqKind::Surjectivity ? "S" : "R"},
                    {"e", inj.index}});
  j["injuries"] = injs;
  j["step_caps"] = run.step_caps;
  if (!out_path.empty()) emit(out_path, j);
  say(o, "stages " + std::to_string(run.stages) + ", |p| = " +
             std::to_string(run.p_final.size()) + ", evidence verified " +
             std::to_string(verified) + "/" +
             std::to_string(run.evidence.size()));
  return verified == run.evidence.size() ? 0 : 1;
}

int run_list(const std::string& kind) {
  if (kind == "theories") {
    for (const auto& t : registry())
      std::cout << t.id << "  " << (t.model_complete ? "[mc] " : "     ")
                << t.docs << "\n";
    return 0;
  }
  if (kind == "presentations") {
    for (const auto& n : builtin_presentation_names()) std::cout << n << "\n";
    return 0;
  }
  if (kind == "functionals") {
    for (const auto& f : candidate_functionals())
      std::cout << f.id << "  " << f.program_text << "\n";
    for (const auto& t : registry())
      if (t.model_complete)
        std::cout << "decider:" << t.id
                  << "  uniform decision functional of " << t.id << "\n";
    return 0;
  }
  throw std::runtime_error("unknown listing: " + kind +
                           " (theories | presentations | functionals)");
}

int run_verify_qe(const Options& o, const std::string& tid,
                  const std::string& text, uint64_t samples,
                  const std::string& out_path) {
  const TheoryDescriptor& t = theory(tid);
  FormulaPtr phi = parse_formula(t.surface_sig, text);
  QEReport rep = verify_qe(t, phi, samples, o.seed);
  say(o, "samples " + std::to_string(rep.samples) + ", mismatches " +
             std::to_string(rep.mismatches));
  for (const auto& d : rep.details) say(o, "  " + d);
  if (!out_path.empty()) {
    json j;
    j["seed"] = o.seed;
    j["samples"] = rep.samples;
    j["mismatches"] = rep.mismatches;
    j["details"] = rep.details;
    emit(out_path, j);
  }
  return rep.mismatches == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"decision procedures over presented structures"};
  app.require_subcommand(1);
  Options opt;
  app.add_option("--seed", opt.seed, "seed for sampling suites");
  app.add_flag("--quiet", opt.quiet, "suppress the stdout summary");

  std::string tid, pres, sentence, trace_path, out_path, eval_spec, fn_list,
      base, kind;
  uint64_t max_steps = 1000000, stage = 100, witness_bound = 50, stages = 200,
           samples = 100;

  auto* dec = app.add_subcommand("decide", "decide a sentence over a copy");
  dec->add_option("--theory", tid)->required();
  dec->add_option("--presentation", pres)->required();
  dec->add_option("--sentence", sentence)->required();
  dec->add_option("--max-steps", max_steps);
  dec->add_option("--trace", trace_path);

  auto* sg = app.add_subcommand(
      "sigma1", "extract and evaluate an existential equivalent");
  sg->add_option("--theory", tid)->required();
  sg->add_option("--alpha", sentence)->required();
  sg->add_option("--stage", stage);
  sg->add_option("--eval", eval_spec);
  sg->add_option("--witness-bound", witness_bound);
  sg->add_option("--out", out_path);

  auto* dg = app.add_subcommand("diagonalize",
                                "build a copy defeating candidate deciders");
  dg->add_option("--base", base)->required();
  dg->add_option("--functionals", fn_list)->required();
  dg->add_option("--stages", stages);
  dg->add_option("--out", out_path);

  auto* ls = app.add_subcommand("list", "list registered identifiers");
  ls->add_option("kind", kind)->required();

  auto* vq = app.add_subcommand("verify-qe",
                                "check a universal pair against the oracle");
  vq->add_option("--theory", tid)->required();
  vq->add_option("--sentence", sentence)->required();
  vq->add_option("--samples", samples);
  vq->add_option("--out", out_path);

  try {
    app.parse(argc, argv);
    if (dec->parsed())
      return run_decide(opt, tid, pres, sentence, max_steps, trace_path);
    if (sg->parsed())
      return run_sigma1(opt, tid, sentence, stage, eval_spec, witness_bound,
                        out_path);
    if (dg->parsed()) return run_diagonalize(opt, base, fn_list, stages, out_path);
    if (ls->parsed()) return run_list(kind);
    if (vq->parsed()) return run_verify_qe(opt, tid, sentence, samples, out_path);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 3;
}
