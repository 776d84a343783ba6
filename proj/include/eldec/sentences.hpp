#ifndef ELDEC_SENTENCES_HPP
#define ELDEC_SENTENCES_HPP

#include "eldec/formula.hpp"

namespace eldec {

/// Canonical numbering of the closed formulas of a signature (domain
/// constants allowed), by increasing weight and then by a fixed
/// within-weight order. Weight charges 1 per connective or term node,
/// i+2 for the domain constant #i, and 2 per quantifier; bound variables
/// are named x0, x1, ... by nesting depth. Every closed formula built
/// from atoms, equality, ~, &, | and quantifiers (no ->, true, false)
/// appears exactly once.
FormulaPtr sentence_at(const Signature& sig, uint64_t code);

/// Inverse lookup: the code of `s` (after canonical renaming of its bound
/// variables), searching codes < limit. Nullopt if not found — e.g. the
/// formula uses syntax outside the numbered fragment, or its code is
/// beyond the limit.
std::optional<uint64_t> sentence_code(const Signature& sig, const FormulaPtr& s,
                                      uint64_t limit);

/// Number of numbered sentences of the given weight (diagnostics/tests).
uint64_t sentence_count_at_weight(const Signature& sig, unsigned weight);

}  // namespace eldec

#endif
