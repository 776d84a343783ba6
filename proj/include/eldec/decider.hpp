#ifndef ELDEC_DECIDER_HPP
#define ELDEC_DECIDER_HPP

#include <functional>

#include "eldec/sentences.hpp"
#include "eldec/theories.hpp"

namespace eldec {

/// A queried fact is not determined by the available diagram prefix.
struct OracleGap : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct StepsExhausted : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Bit access to (a prefix of) an atomic diagram, logging every query.
class DiagramOracle {
public:
  explicit DiagramOracle(Signature sig) : sig_(std::move(sig)) {}
  virtual ~DiagramOracle() = default;

  /// Raw fact lookup; nullopt when the code is beyond the prefix.
  virtual std::optional<bool> fact(uint64_t code) const = 0;

  /// Logged lookup; throws OracleGap on an undetermined code.
  bool query(uint64_t code) {
    auto b = fact(code);
    log_.push_back(code);
    if (code >= use_) use_ = code + 1;
    if (!b) throw OracleGap("atomic code " + std::to_string(code) +
                            " is beyond the available diagram prefix");
    return *b;
  }

  const Signature& signature() const { return sig_; }
  const std::vector<uint64_t>& log() const { return log_; }
  uint64_t use() const { return use_; }  // max queried code + 1
  void reset_log() { log_.clear(); use_ = 0; }

private:
  Signature sig_;
  std::vector<uint64_t> log_;
  uint64_t use_ = 0;
};

/// Total oracle backed by a presentation (staged mappings may still gap).
class PresentationOracle final : public DiagramOracle {
public:
  explicit PresentationOracle(const Presentation& p)
      : DiagramOracle(p.signature()), p_(p) {}
  std::optional<bool> fact(uint64_t code) const override {
    return p_.try_query(code);
  }

private:
  const Presentation& p_;
};

/// Finite prefix oracle: bits for codes < |bits| only.
class PrefixOracle final : public DiagramOracle {
public:
  PrefixOracle(Signature sig, std::vector<bool> bits)
      : DiagramOracle(std::move(sig)), bits_(std::move(bits)) {}
  std::optional<bool> fact(uint64_t code) const override {
    if (code >= bits_.size()) return std::nullopt;
    return bits_[code];
  }
  size_t length() const { return bits_.size(); }

private:
  std::vector<bool> bits_;
};

enum class Verdict { False = 0, True = 1, Timeout = 2 };

struct DecisionTrace {
  FormulaPtr alpha, beta;               // universal-pair matrices
  std::vector<std::string> yvars;
  std::vector<uint64_t> witness;        // tuple falsifying one matrix
  char witness_matrix = 0;              // 'a' or 'b'; 0 on timeout
  std::vector<uint64_t> queries;
  uint64_t use = 0;
  uint64_t steps = 0;
  std::optional<uint64_t> least_element;  // nonuniform wrapper: located z
};

/// Interpretation of named constants as copy elements, bypassing the
/// marker-relation search (used when the diagram lacks the marker).
using ConstBinding = std::vector<std::pair<std::string, uint64_t>>;

/// Elementary-diagram decision for a model-complete theory: obtain the
/// universal pair (alpha, beta) for the sentence, then dovetail witness
/// tuples in max-then-lex order, checking each against both matrices via
/// atomic queries only. The matrix that acquires a counterexample settles
/// the verdict; budget exhaustion is a distinct Timeout outcome.
Verdict decide_mc(const TheoryDescriptor& t, DiagramOracle& oracle,
                  const FormulaPtr& sentence, uint64_t max_steps,
                  DecisionTrace* trace = nullptr,
                  const ConstBinding& binding = {});

Verdict decide_mc(const TheoryDescriptor& t, const Presentation& p,
                  const FormulaPtr& sentence, uint64_t max_steps,
                  DecisionTrace* trace = nullptr);

/// Decision over a copy of the successor line without a zero mark: first
/// locate the unique predecessor-free element z by expanding-window
/// search (committing after `stable_doublings` consecutive window
/// doublings with the same sole candidate), then decide via the
/// zero-marked theory with the zero constant bound to z.
Verdict decide_succ_nonuniform(const Presentation& p, const FormulaPtr& sentence,
                               uint64_t max_steps,
                               DecisionTrace* trace = nullptr,
                               unsigned stable_doublings = 3);

/// Same search over an arbitrary diagram oracle (e.g. a finite prefix).
Verdict decide_succ_nonuniform(DiagramOracle& o, const FormulaPtr& sentence,
                               uint64_t max_steps,
                               DecisionTrace* trace = nullptr,
                               unsigned stable_doublings = 3);

struct FunctionalRun {
  bool converged = false;
  int bit = -1;
  uint64_t use = 0;
  std::vector<uint64_t> queries;
  uint64_t steps = 0;
};

/// A deterministic oracle program: given a finite diagram prefix and the
/// code of a sentence, either converges to a bit (with the queried codes
/// all below the reported use) or diverges within the step budget.
struct Functional {
  std::string id;
  std::string program_text;  // fixed description, presentation-independent
  Signature sentence_sig;    // signature of the input sentence numbering
  Signature diagram_sig;     // signature the oracle prefix is coded over
  std::function<FunctionalRun(const std::vector<bool>& prefix,
                              uint64_t sentence_code, uint64_t max_steps)>
      run;
};

/// The uniform decision functional of a model-complete theory: a wrapper
/// of decide_mc over prefix oracles. Convergence iff the decision
/// completes within the prefix and budget.
Functional as_functional(const TheoryDescriptor& t);

struct LocalEvidence {
  bool found = false;
  int bit = -1;
  uint64_t n = 0;             // block index: sigma has length l_n
  std::vector<bool> sigma;    // pulled-back diagram prefix
  std::vector<uint64_t> b;    // b[i] = rho(i), the copy elements used
  uint64_t steps = 0;
};

/// The local search: find n, an injective rho on 0..n extending p and
/// fixing the elements of c, such that the pullback of the diagram of C
/// along rho is a string sigma with phi_e^sigma(code of phi) converging.
/// The returned bit is phi_e's output on that evidence.
LocalEvidence local_search_decide(const Functional& phi_e,
                                  const Presentation& c_pres,
                                  const Condition& p, const FormulaPtr& phi,
                                  const std::vector<uint64_t>& c,
                                  uint64_t max_steps);

/// The pullback of C's atomic diagram along the finite injective map rho
/// (rho: 0..n -> elements of C): bit at code gamma is the truth in C of
/// the atom with its constants renamed through rho.
std::vector<bool> pullback_prefix(const Presentation& c_pres,
                                  const std::vector<uint64_t>& rho);

}  // namespace eldec

#endif
