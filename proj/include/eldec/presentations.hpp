#ifndef ELDEC_PRESENTATIONS_HPP
#define ELDEC_PRESENTATIONS_HPP

#include <map>
#include <mutex>

#include "eldec/coding.hpp"
#include "eldec/formula.hpp"
#include "eldec/rational.hpp"

namespace eldec {

struct InsufficientStages : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// An abstract countable structure together with a fixed bijection
/// ω → domain; atom() answers atomic facts at abstract domain indices.
class Family {
public:
  virtual ~Family() = default;
  virtual const Signature& diagram_signature() const = 0;
  virtual bool atom(const std::string& rel,
                    const std::vector<uint64_t>& idx) const = 0;
  virtual std::string tag() const = 0;
};

using FamilyPtr = std::shared_ptr<const Family>;

/// (ω,S) shifted: index i stands for the natural number i+shift, so
/// shift=1 is the copy on ω−{0} whose least element is 1. with_zero adds
/// the unary Zero relation marking the natural number 0.
class SuccessorLineFamily final : public Family {
public:
  SuccessorLineFamily(uint64_t shift, bool with_zero);
  const Signature& diagram_signature() const override { return sig_; }
  bool atom(const std::string& rel,
            const std::vector<uint64_t>& idx) const override;
  std::string tag() const override;
  uint64_t shift() const { return shift_; }
  bool with_zero() const { return with_zero_; }
  uint64_t natural(uint64_t i) const { return i + shift_; }

private:
  uint64_t shift_;
  bool with_zero_;
  Signature sig_;
};

/// ℚ∩[0,1] with endpoint marks: 0↦0, 1↦1, then the interior rationals in
/// Calkin–Wilf order.
class Dlo01Family final : public Family {
public:
  Dlo01Family();
  const Signature& diagram_signature() const override { return sig_; }
  bool atom(const std::string& rel,
            const std::vector<uint64_t>& idx) const override;
  std::string tag() const override { return "dlo01"; }
  Rational value(uint64_t i) const;

private:
  Signature sig_;
  mutable std::mutex mu_;
  mutable std::vector<Rational> interior_;  // Calkin–Wilf filtered to (0,1)
  mutable uint64_t cw_next_ = 1;
};

/// ℚ ∩ ∪_{i≤n}[2i,2i+1] with the 2n+2 interval endpoints marked by unary
/// relations E0..E_{2n+1}; endpoints occupy domain indices 0..2n+1, the
/// interiors follow interleaved across intervals in Calkin–Wilf order.
class IntervalUnionFamily final : public Family {
public:
  explicit IntervalUnionFamily(unsigned n);
  const Signature& diagram_signature() const override { return sig_; }
  bool atom(const std::string& rel,
            const std::vector<uint64_t>& idx) const override;
  std::string tag() const override;
  Rational value(uint64_t i) const;
  unsigned n() const { return n_; }

private:
  unsigned n_;
  Signature sig_;
  mutable std::mutex mu_;
  mutable std::vector<Rational> interior_;
  mutable uint64_t cw_next_ = 1;
};

/// ℚ with every point doubled, ordered lexicographically; with_adj adds
/// Adj holding exactly on the pairs ((q,0),(q,1)). Index 2k is (q_k,0) and
/// 2k+1 is (q_k,1) over the fixed enumeration q_k of ℚ.
class ShuffleFamily final : public Family {
public:
  explicit ShuffleFamily(bool with_adj);
  const Signature& diagram_signature() const override { return sig_; }
  bool atom(const std::string& rel,
            const std::vector<uint64_t>& idx) const override;
  std::string tag() const override { return with_adj_ ? "shuffle+adj" : "shuffle"; }
  std::pair<Rational, int> value(uint64_t i) const;
  bool with_adj() const { return with_adj_; }

private:
  bool with_adj_;
  Signature sig_;
};

/// Finite injective map from an initial segment of ω into ω.
struct Condition {
  std::vector<uint64_t> map;  // map[i] = image of i

  size_t size() const { return map.size(); }
  bool injective() const;
  bool extends(const Condition& other) const;
  std::optional<uint64_t> preimage(uint64_t v) const;
};

/// Bijection of ω, either finitely supported (explicit displaced pairs,
/// identity elsewhere) or the staged limit of a Condition prefix. Staged
/// permutations throw InsufficientStages past their prefix.
class Permutation {
public:
  enum class Kind { FinSupp, Staged };

  static Permutation identity();
  static Permutation fin_supp(std::map<uint64_t, uint64_t> pairs);
  static Permutation swap_pair(uint64_t a, uint64_t b);
  static Permutation staged(Condition prefix);

  Kind kind() const { return kind_; }
  uint64_t apply(uint64_t i) const;
  std::optional<uint64_t> try_apply(uint64_t i) const;
  std::optional<uint64_t> preimage(uint64_t v) const;
  Permutation inverse() const;  // finitely supported only
  bool is_identity() const;
  const std::map<uint64_t, uint64_t>& pairs() const { return pairs_; }
  const Condition& prefix() const { return prefix_; }

  /// this ∘ other: i ↦ this(other(i)). Staged components shorten the
  /// resulting prefix to what is computable.
  Permutation compose(const Permutation& other) const;

  std::string describe() const;

private:
  Kind kind_ = Kind::FinSupp;
  std::map<uint64_t, uint64_t> pairs_;  // FinSupp
  Condition prefix_;                    // Staged
};

/// A copy of a family on domain ω: element i of the copy plays abstract
/// element f(i). query answers the atomic diagram of the copy.
class Presentation {
public:
  explicit Presentation(FamilyPtr fam, Permutation f = Permutation::identity());

  const Signature& signature() const { return family_->diagram_signature(); }
  const FamilyPtr& family() const { return family_; }
  const Permutation& mapping() const { return f_; }

  bool query(uint64_t code) const;
  std::optional<bool> try_query(uint64_t code) const;

  /// Abstract element played by copy element i (and its inverse).
  uint64_t abstract_of(uint64_t i) const { return f_.apply(i); }
  std::optional<uint64_t> index_of_abstract(uint64_t a) const {
    return f_.preimage(a);
  }

  std::string spec() const;

private:
  FamilyPtr family_;
  Permutation f_;
};

Presentation pullback(const Presentation& p, const Permutation& f);

/// Δ(P) restricted to codes below l_n, as a bit string.
std::vector<bool> initial_segment(const Presentation& p, uint64_t n);

/// The quantifier-free description of a finite diagram string: positive
/// and negated atoms per bit plus pairwise distinctness of #0..#m.
/// |sigma| must be a block length l_m.
FormulaPtr gamma_sigma(const Signature& sig, const std::vector<bool>& sigma);

/// Index m with |sigma| = l_m, if the length is a block boundary.
std::optional<uint64_t> block_index_of_length(const Signature& sig,
                                              uint64_t length);

/// The atomic facts of P over exactly the given (distinct) elements, as
/// literals.
std::vector<FormulaPtr> delta_restrict(const Presentation& p,
                                       const std::vector<uint64_t>& tuple);

/// Permute an initial segment of E so the result extends p: element i of
/// the result plays E's element e[i], for i < |p|.
Presentation canonicalize(const Presentation& e_pres,
                          const std::vector<uint64_t>& e, const Condition& p);

/// Parse a presentation spec: `succ`, `succ:shift=K`, `succ0`, `dlo01`,
/// `a_n:n=K`, `shuffle`, `shuffle+adj`,
/// `pullback:<base>:<i=j,...>` (finitely supported images).
Presentation make_builtin(const std::string& spec);

std::vector<std::string> builtin_presentation_names();

}  // namespace eldec

#endif
