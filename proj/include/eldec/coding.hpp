#ifndef ELDEC_CODING_HPP
#define ELDEC_CODING_HPP

#include "eldec/formula.hpp"

namespace eldec {

/// Numbering of atomic sentences over domain constants #0,#1,… for a
/// relational signature (equality is implicit; functions are not allowed
/// here — presentations see only relation graphs). Codes are grouped in
/// blocks: block n lists, in order, the equality atoms #i=#n for i<n
/// (increasing i), then for each relation (declaration order) every tuple
/// over {0,…,n} whose maximum entry is n, in lexicographic order. Trivial
/// atoms #i=#i get no code. Consequently every atom mentioning only
/// constants ≤ n has a code below every atom mentioning n+1.

/// Number of atoms in block n alone.
uint64_t block_size(const Signature& sig, uint64_t n);

/// l_n: number of atomic codes over constants {0,…,n}, i.e. Σ_{m≤n} |block m|.
uint64_t block_length(const Signature& sig, uint64_t n);

/// The block an atom with maximum constant index n lives in starts at
/// l_{n-1} (0 for n = 0).
uint64_t block_start(const Signature& sig, uint64_t n);

/// Encode an atomic sentence whose terms are all domain constants.
/// The formula must be an Eq of two distinct constants or an Atom over a
/// declared relation; anything else is a coding-domain error.
uint64_t encode_atomic(const Signature& sig, const FormulaPtr& atom);

/// Total inverse of encode_atomic.
FormulaPtr decode_atomic(const Signature& sig, uint64_t code);

/// Largest constant index mentioned by the atom with this code.
uint64_t code_block(const Signature& sig, uint64_t code);

}  // namespace eldec

#endif
