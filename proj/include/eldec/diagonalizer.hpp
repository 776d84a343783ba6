#ifndef ELDEC_DIAGONALIZER_HPP
#define ELDEC_DIAGONALIZER_HPP

#include "eldec/decider.hpp"

namespace eldec {

/// The fixed computable well-order on injective strings over the
/// naturals: by norm (the larger of length and 1 + max entry), then by
/// length, then lexicographically. Order type omega.
bool prec_less(const std::vector<uint64_t>& a, const std::vector<uint64_t>& b);

/// Lazily materializes, in that order, the injective strings extending a
/// fixed stem (the stem itself comes first).
class ExtensionEnumerator {
 public:
  explicit ExtensionEnumerator(std::vector<uint64_t> stem);
  const std::vector<uint64_t>& at(size_t rank);

 private:
  void grow();
  std::vector<uint64_t> stem_;
  uint64_t next_norm_;
  std::vector<std::vector<uint64_t>> cache_;
};

/// Outcome of trying to defeat one candidate functional.
struct DefeatEvidence {
  enum class Kind { Disagreement, Case3, Unresolved };
  Kind kind = Kind::Unresolved;
  size_t functional = 0;  // index into the registry handed in

  // Disagreement: the functional, run on the diagram pulled back along
  // q, converged on the coded sentence with `output`, while the base
  // structure's truth of the sentence with its constants pushed through
  // q is `truth` (and the two differ).
  std::vector<uint64_t> q;
  uint64_t sentence = 0;
  int output = -1;
  bool truth = false;

  // Case3: over every inspected extension of q, the functional failed to
  // converge on `input` within the budget. Explicitly budget-relative.
  uint64_t input = 0;

  // All kinds: the step cap / search breadth the claim is relative to.
  uint64_t budget = 0;
};

/// One-shot disagreement search from a fixed stem: inspect the first
/// `budget` extensions and all sentence codes <= budget, with `budget`
/// as the per-run step cap. Returns the first disagreement found, else a
/// Case-3 candidate (no convergence anywhere) or Unresolved (convergence
/// observed but always in agreement).
DefeatEvidence case_search(const Presentation& a,
                           const std::vector<uint64_t>& stem,
                           const Functional& phi, size_t functional_index,
                           uint64_t budget);

/// Replays the claim in the evidence. Disagreements are replayed
/// exactly; Case-3 certificates are re-checked at twice the breadth and
/// step cap (and remain budget-relative); Unresolved claims nothing and
/// verifies vacuously.
bool verify_defeat(const Presentation& a, const Functional& phi,
                   const DefeatEvidence& ev);

enum class ReqKind { Lowness, Surjectivity, Defeat };

struct RequirementRecord {
  ReqKind kind = ReqKind::Lowness;
  uint64_t index = 0;
  std::vector<uint64_t> chosen;  // the string this requirement settled on
  uint64_t last_change = 0;      // stage of the last change to `chosen`
  bool converged = false;        // Lowness: convergence currently forced
  uint64_t converged_since = 0;
};

struct InjuryRecord {
  uint64_t stage = 0;
  ReqKind kind = ReqKind::Lowness;
  uint64_t index = 0;
};

struct ConstructionRun {
  uint64_t stages = 0;
  std::vector<uint64_t> p_final;
  std::vector<RequirementRecord> requirements;  // priority order
  std::vector<DefeatEvidence> evidence;         // one per functional
  std::vector<InjuryRecord> injuries;
  std::vector<uint64_t> step_caps;  // per stage, logged
  // per stage: the finished map p_s
  std::vector<std::vector<uint64_t>> p_by_stage;
  // per stage, per functional: whether the lowness requirement currently
  // forces convergence
  std::vector<std::vector<uint8_t>> lowness_by_stage;
};

/// The stage loop: at stage s+1 rebuild p from the empty string, going
/// through L_0, S_0, R_0, L_1, ... up to R_s. A lowness requirement
/// extends p to the least string among the first s extensions on which
/// its functional converges at its own index; a surjectivity requirement
/// appends its value if missing from the range; a defeat requirement
/// searches the first s extensions and all sentence codes <= s for a
/// replayable disagreement with the base structure's truth, adopting the
/// least such pair forever, and otherwise extends p to the least string
/// avoiding every extension where convergence was observed.
ConstructionRun run_construction(const Presentation& a,
                                 const std::vector<Functional>& functionals,
                                 uint64_t stages);

/// Candidate functionals for diagonalization over the bare successor
/// line: "zero-anchored" (answers as if the oracle presented the line in
/// canonical order, index 0 least), "always-diverge", and
/// "nonuniform-line" (the least-element search wrapper).
std::vector<Functional> candidate_functionals();
Functional candidate_functional(const std::string& id);

}  // namespace eldec

#endif
