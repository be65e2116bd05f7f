#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "qsym/instance.hpp"
#include "qsym/symmetry.hpp"

namespace qsym {

/// KBKF_n (Kleine Büning, Karpinski, Flögel 1995), in the clause form used
/// throughout the QBF proof-complexity literature:
///
///   ∃d0 d1 e1 ∀x1 ∃d2 e2 ∀x2 ... ∃dn en ∀xn ∃f1..fn
///   (¬d0) (d0 ∨ ¬d1 ∨ ¬e1)
///   (di ∨ xi ∨ ¬d(i+1) ∨ ¬e(i+1)) (ei ∨ ¬xi ∨ ¬d(i+1) ∨ ¬e(i+1))   i < n
///   (dn ∨ xn ∨ ¬f1 ∨ ... ∨ ¬fn)   (en ∨ ¬xn ∨ ¬f1 ∨ ... ∨ ¬fn)
///   (xi ∨ fi) (¬xi ∨ fi)                                            i ≤ n
///
/// 4n+1 variables, 4n+2 clauses; every instance is false. Variables are
/// numbered in prefix order. Throws ValidationError for n < 1.
QbfInstance gen_kbkf(int n);

struct BlockSpec {
  Quantifier quantifier = Quantifier::Exists;
  int size = 1;
};
using BlockPattern = std::vector<BlockSpec>;

/// "a2e3a1" -> ∀^2 ∃^3 ∀^1. A letter without count means one variable.
/// Throws Error(Input) on malformed text.
BlockPattern parse_block_pattern(std::string_view text);

struct RandomQbfOptions {
  std::uint64_t seed = 0;
  int vars = 6;
  int clauses = 8;
  BlockPattern blocks;  // empty: random alternating blocks
  int max_clause_len = 3;
  bool planted = false;
};

struct GeneratedQbf {
  QbfInstance instance;
  std::optional<SignedPermutation> planted;
};

/// Deterministic in the options. With `planted`, a random non-identity
/// block-respecting signed permutation g is drawn and clauses are added in
/// whole ⟨g⟩-orbits until at least `clauses` exist, so g maps the clause set
/// onto itself. Throws ValidationError for infeasible parameters.
GeneratedQbf gen_random_qbf(const RandomQbfOptions& options);

/// Uniformly random block-respecting signed permutation over the prefix
/// variables (degree = num_vars).
SignedPermutation random_block_permutation(const Prefix& prefix, Var num_vars,
                                           std::uint64_t seed);

}  // namespace qsym
