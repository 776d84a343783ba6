#ifndef ELDEC_SIGMA1_HPP
#define ELDEC_SIGMA1_HPP

#include "eldec/decider.hpp"

namespace eldec {

/// One convergence witness: a finite diagram string of block length
/// l_{m} on which the functional answered 1 for the marked formula.
struct HAlphaEntry {
  std::vector<bool> sigma;
  uint64_t m = 0;  // block index: |sigma| = l_m
};

/// Staged enumeration of the strings on which gamma accepts alpha with
/// its free variables read as the constants #0..#n.
struct HAlphaEnumerator {
  Functional gamma;
  FormulaPtr alpha;
  unsigned n = 0;          // free variables x_0..x_n
  uint64_t stage = 0;
  bool prune_equality = true;
  std::optional<uint64_t> alpha_code;  // under gamma's sentence numbering
  std::vector<HAlphaEntry> found;
};

/// Run gamma (step budget = stage) over the candidate strings of block
/// lengths l_0..l_stage, collecting those with output 1. By default
/// strings asserting an equality between distinct constants are skipped:
/// no presentation realizes them, so the matching disjuncts are dead
/// weight (the unpruned variant is available for exactness comparisons).
/// To keep stages finite at desk scale, blocks whose pruned candidate
/// count exceeds 2^18 are not enumerated; the cut is independent of the
/// stage, so found-sets stay monotone in the stage.
HAlphaEnumerator enumerate_H_alpha(const Functional& gamma,
                                   const FormulaPtr& alpha, uint64_t stage,
                                   bool prune_equality = true);

/// One existentially quantified description: exists y_{n+1}..y_{m}
/// gamma_sigma with the constants up to n renamed to x_i and the surplus
/// constants to y_i.
struct Sigma1Disjunct {
  FormulaPtr matrix;              // quantifier-free, free x_0..x_n, y_*
  std::vector<std::string> ys;    // y_{n+1}..y_{m}
  uint64_t m = 0;
  std::vector<bool> sigma;        // the accepted diagram string verbatim
};

struct Sigma1Approx {
  std::vector<Sigma1Disjunct> disjuncts;
  unsigned n = 0;
  uint64_t stage = 0;
};

/// Assemble the finite-stage approximant of the existential equivalent:
/// one disjunct per found string.
Sigma1Approx beta_alpha(const HAlphaEnumerator& en);

enum class Sigma1Result { True, Unknown };

/// Semidecision: true iff some disjunct has a witness tuple with entries
/// below witness_bound satisfying its matrix against P's diagram; never
/// answers false.
Sigma1Result eval_sigma1_bounded(const Presentation& p,
                                 const Sigma1Approx& approx,
                                 const std::vector<uint64_t>& a,
                                 uint64_t witness_bound);

/// General entry point for formulas without a distinctness assumption:
/// expand the identification cases of the free variables, then run the
/// pipeline per case. The full equivalent is the disjunction over cases.
std::vector<std::pair<EqualityCase, Sigma1Approx>> sigma1_form(
    const Functional& gamma, const FormulaPtr& alpha, uint64_t stage);

/// Evaluate the case disjunction at a tuple: find the case whose pattern
/// the tuple realizes, then evaluate its approximant on the class
/// representatives.
Sigma1Result eval_sigma1_general(
    const Presentation& p,
    const std::vector<std::pair<EqualityCase, Sigma1Approx>>& cases,
    const std::vector<uint64_t>& a, uint64_t witness_bound);

/// Truth of a quantifier-free sentence whose terms are all domain
/// constants, read directly off a presentation's diagram.
bool eval_ground(const Presentation& p, const FormulaPtr& f);

}  // namespace eldec

#endif
