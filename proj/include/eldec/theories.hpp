#ifndef ELDEC_THEORIES_HPP
#define ELDEC_THEORIES_HPP

#include "eldec/presentations.hpp"
#include "eldec/transform.hpp"

namespace eldec {

/// Universal-pair witness: phi <-> forall y. alpha and ~phi <-> forall y.
/// beta, both matrices quantifier-free over the theory's surface syntax.
struct QEPair {
  FormulaPtr alpha;
  FormulaPtr beta;
  std::vector<std::string> yvars;  // shared universal prefix variables
};

struct TheoryDescriptor {
  std::string id;
  Signature diagram_sig;   // what presentations answer
  Signature surface_sig;   // adds function symbols / named constants
  bool model_complete = false;
  std::string canonical_spec;  // builtin presentation of the canonical model
  std::string docs;
  // named constant -> unary relation marking it in diagrams
  std::vector<std::pair<std::string, std::string>> const_relations;

  FormulaPtr (*full_qe)(const FormulaPtr&) = nullptr;  // qf equivalent
  QEPair (*qe_pair)(const FormulaPtr&) = nullptr;
};

/// Exactly four theories: succ0 = Th(ω,S,0), dlo++ = dense order with
/// endpoints, adj = Th of the doubled rationals with Adj, succ = Th(ω,S)
/// (not model complete; no QE transformer).
const std::vector<TheoryDescriptor>& registry();
const TheoryDescriptor& theory(const std::string& id);

QEPair qe_universal_pair(const TheoryDescriptor& t, const FormulaPtr& phi);

/// Truth of a sentence (domain constants allowed) in a built-in
/// presentation, decided by direct model-theoretic evaluation — the
/// independent oracle against which the diagram-driven deciders are
/// tested. Supported families: successor lines, dlo01, interval unions,
/// shuffles.
bool classical_truth(const Presentation& p, const FormulaPtr& sentence);

struct QEReport {
  uint64_t samples = 0;
  uint64_t mismatches = 0;
  std::vector<std::string> details;
};

/// Samples parameter tuples in the canonical model and checks both halves
/// of the universal pair against classical_truth.
QEReport verify_qe(const TheoryDescriptor& t, const FormulaPtr& phi,
                   uint64_t samples, uint64_t seed);

/// Same check with externally supplied matrices (negative controls).
QEReport verify_qe_pair(const TheoryDescriptor& t, const FormulaPtr& phi,
                        const QEPair& pair, uint64_t samples, uint64_t seed);

// Per-theory full quantifier elimination (exposed for tests).
FormulaPtr qe_succ_full(const FormulaPtr& f);
FormulaPtr qe_dlo_full(const FormulaPtr& f);
FormulaPtr qe_adj_full(const FormulaPtr& f);  // may mention the left-half
                                              // helper predicate Lh

}  // namespace eldec

#endif
