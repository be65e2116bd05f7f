#pragma once

// Brute-force oracle kernels. Each kernel has a serial reference version,
// written directly against the public formula/strategy API, and an OpenMP
// version working on compiled matrices and packed assignments. Tests
// cross-check the two; bench/ times them.

#include <cstdint>
#include <span>
#include <vector>

#include "qsym/formula.hpp"
#include "qsym/instance.hpp"
#include "qsym/strategy.hpp"

namespace qsym::kernels {

/// Postfix program over packed assignments (variable v is bit v-1).
/// Evaluates either one assignment per word bit (bit-sliced) or a single
/// assignment broadcast to all bits.
class CompiledFormula {
 public:
  explicit CompiledFormula(const Formula& f);

  /// Bit-sliced evaluation: `var_words[v]` carries variable v for 64
  /// independent assignments. Index 0 is unused.
  std::uint64_t evaluate_words(std::span<const std::uint64_t> var_words) const;

  /// Single assignment, variables 1..64 packed in `mask`.
  bool evaluate_mask(std::uint64_t mask) const;

  Var max_var() const { return max_var_; }

 private:
  enum class Op : std::uint8_t { Const0, Const1, Load, Not, And, Or, Iff, Implies, Xor };
  struct Instr {
    Op op;
    std::uint32_t arg;  // variable for Load, arity for And/Or
  };
  std::vector<Instr> code_;
  std::size_t max_stack_ = 0;
  Var max_var_ = 0;
};

/// CNF matrix over packed assignments: a clause is satisfied when
/// (mask & pos) | (~mask & neg) is nonzero.
class CompiledCnf {
 public:
  explicit CompiledCnf(std::span<const Clause> clauses);
  bool evaluate_mask(std::uint64_t mask) const;

 private:
  std::vector<std::uint64_t> pos_;
  std::vector<std::uint64_t> neg_;
};

// ---- truth-table equivalence ----

bool equivalent_serial(const Formula& a, const Formula& b,
                       std::span<const Var> vars);
bool equivalent_parallel(const Formula& a, const Formula& b,
                         std::span<const Var> vars);

// ---- exhaustive strategy evaluation ----

/// Number of strategies of `role` whose value for prefix.matrix is winning
/// for that role (⊤ for existential, ⊥ for universal). Throws SizeError when
/// count_strategies exceeds `cap`.
std::uint64_t count_winning_serial(const Prefix& prefix, const Formula& matrix,
                                   Player role, std::uint64_t cap);
std::uint64_t count_winning_parallel(const Prefix& prefix,
                                     const Formula& matrix, Player role,
                                     std::uint64_t cap);
std::uint64_t count_winning_parallel(const QbfInstance& instance, Player role,
                                     std::uint64_t cap);

/// Whether some strategy of `role` wins. Stops early in both versions.
bool exists_winning_serial(const Prefix& prefix, const Formula& matrix,
                           Player role, std::uint64_t cap);
bool exists_winning_parallel(const QbfInstance& instance, Player role,
                             std::uint64_t cap);

/// Maximum number of threads the parallel kernels use.
int max_threads();

}  // namespace qsym::kernels
