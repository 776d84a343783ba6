#ifndef ELDEC_TRANSFORM_HPP
#define ELDEC_TRANSFORM_HPP

#include "eldec/formula.hpp"

namespace eldec {

/// Negation normal form: implications eliminated, negations pushed to the
/// atoms, true/false folded.
FormulaPtr nnf(const FormulaPtr& f);

/// Cheap logical simplification: constant folding, double negation,
/// duplicate conjunct/disjunct removal. Idempotent; preserves equivalence.
FormulaPtr simplify(const FormulaPtr& f);

/// Logically equivalent prenex form with a quantifier-free matrix. Bound
/// variables are renamed apart, so the prefix never collides with free
/// variables of f.
FormulaPtr to_prenex(const FormulaPtr& f);

struct QuantifierStep {
  bool universal;
  std::string var;
};

/// Split a prenex formula into its prefix and matrix.
std::pair<std::vector<QuantifierStep>, FormulaPtr> split_prenex(
    const FormulaPtr& f);

FormulaPtr rebuild_prenex(const std::vector<QuantifierStep>& prefix,
                          FormulaPtr matrix);

/// One identification pattern for a variable tuple: pattern[i] names the
/// class of variable i as a restricted-growth string. `guarded` is the
/// input with every variable replaced by its class representative (the
/// first variable of its class), conjoined with the identification
/// equalities and with pairwise distinctness of the representatives — so
/// the disjunction of the cases is equivalent to the input on the original
/// tuple.
struct EqualityCase {
  std::vector<unsigned> pattern;
  FormulaPtr guarded;
};

/// All ways the variables of `vars` can be identified with one another.
/// The disjunction of the guarded formulas is equivalent to the input, and
/// within each case the live variables are pairwise distinct. Cases are
/// ordered by number of classes, then pattern reverse-lexicographically;
/// the count is the Bell number B(|vars|).
std::vector<EqualityCase> expand_equality_cases(
    const FormulaPtr& alpha, const std::vector<std::string>& vars);

}  // namespace eldec

#endif
