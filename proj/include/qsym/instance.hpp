#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qsym/formula.hpp"

namespace qsym {

enum class Quantifier : std::uint8_t { Exists, Forall };

constexpr Quantifier flip(Quantifier q) {
  return q == Quantifier::Exists ? Quantifier::Forall : Quantifier::Exists;
}

struct QuantifierBlock {
  Quantifier quantifier = Quantifier::Exists;
  std::vector<Var> variables;

  friend bool operator==(const QuantifierBlock&, const QuantifierBlock&) = default;
};

/// Quantifier prefix, kept normalized: no empty blocks and no two adjacent
/// blocks with the same quantifier. Every variable occurs at most once.
class Prefix {
 public:
  Prefix() = default;
  /// Normalizes `blocks`. Throws ValidationError on a repeated variable or a
  /// non-positive id.
  explicit Prefix(std::vector<QuantifierBlock> blocks);

  /// Appends `v` at the innermost position, merging into the last block when
  /// the quantifier matches.
  void append(Quantifier q, Var v);

  const std::vector<QuantifierBlock>& blocks() const { return blocks_; }
  std::size_t block_count() const { return blocks_.size(); }

  /// Variables in prefix order (x_1 .. x_n).
  std::vector<Var> order() const;
  std::size_t size() const { return size_; }
  bool empty() const { return size_ == 0; }

  bool contains(Var v) const { return block_of(v) >= 0; }
  /// Block index of `v`, or -1 when `v` is not quantified.
  int block_of(Var v) const {
    return v >= 1 && static_cast<std::size_t>(v) < block_index_.size()
               ? block_index_[v]
               : -1;
  }
  /// Throws ValidationError when `v` is not quantified.
  Quantifier quantifier_of(Var v) const;
  Var max_var() const { return block_index_.empty() ? 0 : Var(block_index_.size() - 1); }

  /// Every ∃ replaced by ∀ and vice versa.
  Prefix flipped() const;

  friend bool operator==(const Prefix& a, const Prefix& b) {
    return a.blocks_ == b.blocks_;
  }

  std::string to_string() const;

 private:
  void index_block(std::size_t b);

  std::vector<QuantifierBlock> blocks_;
  std::vector<int> block_index_;  // by variable id, -1 when absent
  std::size_t size_ = 0;
};

/// Disjunction (clause) or conjunction (cube) of literals.
using Clause = std::vector<Literal>;
using Cube = std::vector<Literal>;

/// Removes duplicate literals keeping first occurrences. Returns nullopt for
/// a clause holding a complementary pair (a tautology).
std::optional<Clause> normalize_clause(const Clause& clause);
/// Same for cubes; a complementary pair makes the cube unsatisfiable.
std::optional<Cube> normalize_cube(const Cube& cube);

/// Literals sorted by variable; used for multiset comparisons.
Clause sorted_literals(Clause clause);

/// Closed prenex CNF QBF P.φ.
struct QbfInstance {
  Var num_vars = 0;
  Prefix prefix;
  std::vector<Clause> matrix;

  // metadata, ignored by structural equality
  std::vector<std::string> comments;
  std::vector<Var> free_variables;  // bound by a synthetic outer ∃ block
  std::vector<std::string> warnings;

  /// Prefix, matrix and variable count agree.
  bool structurally_equal(const QbfInstance& other) const;

  /// Quantified variables that do not occur in the matrix.
  std::vector<Var> unused_variables() const;

  Formula matrix_formula() const { return Formula::from_clauses(matrix); }

  /// Throws ValidationError unless every matrix variable is quantified and
  /// every clause is normalized.
  void validate() const;
};

}  // namespace qsym
