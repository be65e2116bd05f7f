#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qsym/formula.hpp"
#include "qsym/instance.hpp"
#include "qsym/strategy.hpp"
#include "qsym/symmetry.hpp"

namespace qsym {

/// Which group elements the lex-leader breaker is instantiated for.
struct Selection {
  enum class Policy { Generators, Products, FullGroup };
  Policy policy = Policy::Generators;
  std::size_t max_length = 1;    // Products: words of length 1..max_length
  std::size_t group_cap = 10000;  // FullGroup / Products
};

/// Distinct non-identity elements chosen by `selection`, generators first.
std::vector<SignedPermutation> select_elements(std::span<const SignedPermutation> generators,
                                               const Selection& selection = {});

/// Lex-leader breaker. For an existential breaker of prefix P,
///
///   ψ = ⋀_{i : Q_i = ∃} ⋀_g ((⋀_{j<i} x_j ↔ g(x_j)) → (x_i → g(x_i)))
///
/// with one conjunct per (g, i). A universal breaker for P is ¬ψ where ψ is
/// built for the flipped prefix.
struct BreakerFormula {
  Player polarity = Player::Existential;
  Prefix prefix;  // the prefix the breaker is for
  std::vector<SignedPermutation> elements;
  std::vector<std::vector<Formula>> conjuncts;  // per element, in variable order

  /// ψ for existential, ¬ψ̃ for universal.
  Formula formula() const;
  /// The positive conjunction (ψ, or ψ̃ for a universal breaker).
  Formula conjunction() const;
};

/// Throws ValidationError when a generator is not block-respecting.
BreakerFormula lex_leader_formula(const Prefix& prefix,
                                  std::span<const SignedPermutation> generators,
                                  const Selection& selection = {});
BreakerFormula universal_lex_leader_formula(const Prefix& prefix,
                                            std::span<const SignedPermutation> generators,
                                            const Selection& selection = {});

/// Fresh Tseitin variable of an encoding.
struct AuxVariable {
  Var var = 0;
  Quantifier quantifier = Quantifier::Exists;
  /// Inserted right after this block of the original prefix; -1 places it
  /// before every block.
  int after_block = -1;
  std::size_t element = 0;  // index into `elements`
  int chain_index = 0;      // j of y_j
};

struct EncodedBreaker {
  Player polarity = Player::Existential;
  Prefix original;
  Prefix extended;
  Var num_vars = 0;  // after adding auxiliaries
  std::vector<SignedPermutation> elements;
  std::vector<AuxVariable> aux;
  std::vector<Clause> clauses;  // existential encoding
  std::vector<Cube> cubes;      // universal encoding
};

struct EncodeOptions {
  /// Skip positions with g(x) = x: their chain links are tautologies and
  /// their I clauses vanish. Off reproduces the plain per-position chain.
  bool compress_identity = true;
  /// First auxiliary id; 0 means num_vars + 1.
  Var first_aux = 0;
  Selection selection;
};

/// Tseitin CNF of the existential lex-leader breaker. Per element g: unit
/// y_0; I = (¬y_{i-1} ∨ ¬x_i ∨ g(x_i)) for existential i; for each chain
/// link j, E = (y_j ∨ ¬y_{j-1} ∨ ¬x_j), (y_j ∨ ¬y_{j-1} ∨ g(x_j)) when x_j is
/// existential, U = (y_j ∨ ¬y_{j-1} ∨ ¬x_j ∨ ¬g(x_j)),
/// (y_j ∨ ¬y_{j-1} ∨ x_j ∨ g(x_j)) when universal. y_j is existential and
/// placed after the block of x_j; y_0 is outermost. Tautologies and repeated
/// clauses are dropped, and elements producing nothing else emit nothing.
EncodedBreaker encode_existential_cnf(const Prefix& prefix, Var num_vars,
                                      std::span<const SignedPermutation> generators,
                                      const EncodeOptions& options = {});

/// Cube encoding of the universal breaker: the existential encoding for the
/// flipped prefix, each clause negated into a cube, auxiliaries universal.
EncodedBreaker encode_universal_dnf(const Prefix& prefix, Var num_vars,
                                    std::span<const SignedPermutation> generators,
                                    const EncodeOptions& options = {});

enum class AugmentMode { ConjoinCnf, AttachDnf, Combined };

/// Result of augmentation. With cubes present the formula is
/// P'.(matrix ∨ ⋁cubes).
struct AugmentedInstance {
  QbfInstance instance;
  std::optional<std::vector<Cube>> cubes;

  std::string qdimacs() const;
  std::string dnf() const;  // empty when there are no cubes
};

/// ConjoinCnf takes one existential encoding, AttachDnf one universal,
/// Combined one of each (in either order). Throws ValidationError on a
/// prefix mismatch, wrong polarities or clashing auxiliary ids.
AugmentedInstance augment_instance(const QbfInstance& instance,
                                   std::span<const EncodedBreaker> encodings,
                                   AugmentMode mode);

struct BreakerReport {
  std::size_t orbits = 0;
  std::size_t covered = 0;
  std::vector<std::size_t> uncovered;  // orbit indices

  bool passed() const { return covered == orbits; }
};

/// Every semantic orbit of existential strategies contains s with
/// [P.ψ]_s = ⊤.
BreakerReport verify_breaker(const Prefix& prefix,
                             std::span<const SignedPermutation> generators,
                             const Formula& psi, const OrbitOptions& options = {});

/// Every semantic orbit of universal strategies contains t with
/// [P.ψ]_t = ⊥.
BreakerReport verify_universal_breaker(const Prefix& prefix,
                                       std::span<const SignedPermutation> generators,
                                       const Formula& psi,
                                       const OrbitOptions& options = {});

}  // namespace qsym
