#pragma once

#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qsym/formula.hpp"
#include "qsym/instance.hpp"

namespace qsym {

/// Bijection on variables with optional polarity flips: each variable is
/// sent to a literal. Defined on 1..degree; variables above the degree are
/// fixed.
///
/// A signed permutation acts on formulas by substituting x ↦ g(x) and on
/// assignments by g(σ)(x) = [g(x)]_σ.
class SignedPermutation {
 public:
  SignedPermutation() = default;

  static SignedPermutation identity(Var degree);
  /// `images[v-1]` is the image of variable v. Throws ValidationError unless
  /// the underlying variable map is a bijection on 1..images.size().
  static SignedPermutation from_images(std::vector<Literal> images);

  Var degree() const { return Var(images_.size()); }
  Literal image(Var v) const {
    return v >= 1 && v <= degree() ? images_[v - 1] : Literal(v);
  }
  Literal operator()(Literal lit) const { return image(lit.var()) ^ lit.is_negative(); }

  bool is_identity() const;
  /// Variables with g(x) != x.
  std::vector<Var> support() const;

  SignedPermutation inverse() const;
  /// Same map on a larger variable range.
  SignedPermutation extended(Var degree) const;

  /// Product whose action on assignments is g(h(σ)). As a literal map it is
  /// x ↦ h(g(x)).
  friend SignedPermutation operator*(const SignedPermutation& g,
                                     const SignedPermutation& h);

  Clause apply(const Clause& clause) const;
  Formula apply(const Formula& f) const;
  Assignment apply(const Assignment& sigma) const;
  /// Packed form of apply(Assignment) for variables 1..64.
  std::uint64_t apply_mask(std::uint64_t mask) const;

  friend bool operator==(const SignedPermutation& a, const SignedPermutation& b);
  friend std::strong_ordering operator<=>(const SignedPermutation& a,
                                          const SignedPermutation& b);

 private:
  std::vector<Literal> images_;
};

/// Signed cycle notation. A cycle (a1 a2 ... ak) of signed variable ids means
/// |a_i| ↦ a_{i+1} (indices mod k): the sign of an entry is the polarity with
/// which the previous variable is sent to it. Hence "(1 2)" swaps 1 and 2,
/// "(-5)" negates 5, and "(1 -2)" sends 1 to ¬2 and 2 to 1. Positive fixed
/// points are omitted; the identity prints as "()".
std::string to_cycle_notation(const SignedPermutation& g);
/// Throws ParseError (line 1) on malformed text and ValidationError when a
/// variable repeats or exceeds `degree`.
SignedPermutation parse_cycle_notation(std::string_view text, Var degree);

/// One generator per non-empty line; lines starting with 'c' or '#' are
/// comments.
std::vector<SignedPermutation> parse_generators(std::string_view text, Var degree);
std::string format_generators(std::span<const SignedPermutation> generators);

/// Image variable of every quantified x lies in the block of x; unquantified
/// variables are fixed.
bool is_block_respecting(const SignedPermutation& g, const Prefix& prefix);

/// Generators validated against a prefix.
class GeneratorSet {
 public:
  GeneratorSet() = default;
  /// Throws ValidationError when a generator is not block-respecting.
  GeneratorSet(Prefix prefix, std::vector<SignedPermutation> generators);

  const Prefix& prefix() const { return prefix_; }
  const std::vector<SignedPermutation>& generators() const { return generators_; }
  std::size_t size() const { return generators_.size(); }
  bool empty() const { return generators_.empty(); }

 private:
  Prefix prefix_;
  std::vector<SignedPermutation> generators_;
};

/// General admissible-map candidate: every variable sent to a formula.
class AdmissibleMap {
 public:
  AdmissibleMap() = default;
  /// `images[v-1]` is the image of variable v.
  explicit AdmissibleMap(std::vector<Formula> images);
  static AdmissibleMap from(const SignedPermutation& g);

  Var degree() const { return Var(images_.size()); }
  Formula image(Var v) const;

  Formula apply(const Formula& f) const;
  /// f(σ)(x) = [f(x)]_σ for x in 1..degree.
  Assignment apply(const Assignment& sigma) const;

 private:
  std::vector<Formula> images_;
};

struct AdmissibilityReport {
  bool bijective = true;       // condition 1: σ ↦ f(σ) is a bijection
  bool block_respecting = true;  // condition 2
  std::vector<std::string> violations;

  bool ok() const { return bijective && block_respecting; }
};

/// Checks both admissibility conditions. Condition 2 is syntactic; condition
/// 1 enumerates all 2^n assignments of the prefix variables and throws
/// SizeError when n exceeds `max_vars`.
AdmissibilityReport check_admissible(const AdmissibleMap& map, const Prefix& prefix,
                                     std::size_t max_vars = 16);

Assignment apply_to_assignment(const AdmissibleMap& map, const Assignment& sigma);
Assignment apply_to_assignment(const SignedPermutation& g, const Assignment& sigma);

enum class SymmetryCheck {
  ClauseMultiset,  // g maps the clause multiset onto itself (sufficient)
  TruthTable,      // φ and g(φ) equivalent (exact, n ≤ 16)
};

/// Throws ValidationError when g is not block-respecting for the prefix and
/// SizeError when the truth-table check exceeds 16 variables.
bool is_syntactic_symmetry(const SignedPermutation& g, const QbfInstance& instance,
                           SymmetryCheck mode = SymmetryCheck::ClauseMultiset);

/// All elements of ⟨generators⟩ by breadth-first products, identity first.
/// Throws SizeError when the group has more than `cap` elements.
std::vector<SignedPermutation> group_closure(std::span<const SignedPermutation> generators,
                                             std::size_t cap = 10000);

/// {g(σ) : g ∈ ⟨generators⟩}, sorted by packed value.
std::vector<Assignment> orbit_of_assignment(std::span<const SignedPermutation> generators,
                                            const Assignment& sigma,
                                            std::size_t cap = 10000);

}  // namespace qsym
