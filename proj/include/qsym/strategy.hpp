#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "qsym/formula.hpp"
#include "qsym/instance.hpp"
#include "qsym/symmetry.hpp"

namespace qsym {

enum class Player : std::uint8_t { Existential, Universal };

constexpr Player opponent(Player p) {
  return p == Player::Existential ? Player::Universal : Player::Existential;
}
constexpr Quantifier owned_quantifier(Player p) {
  return p == Player::Existential ? Quantifier::Exists : Quantifier::Forall;
}

using BigInt = boost::multiprecision::cpp_int;

/// Layout shared by all strategies of one (prefix, role).
///
/// An owner variable at prefix position i has one edge label per history,
/// where the history is the assignment to the opponent variables before i.
/// Labels are stored flat, level by level, histories in increasing order
/// with the first opponent variable as the most significant bit. This is
/// breadth-first edge order, so comparing label vectors lexicographically
/// compares strategies in the order used by the lex-leader construction.
class StrategyShape {
 public:
  /// Throws SizeError when the prefix has more than 64 variables or more
  /// than 62 opponent variables (paths are packed in 64-bit words).
  StrategyShape(const Prefix& prefix, Player role);

  struct Position {
    Var var;
    bool owned;
    std::uint32_t history_bits;  // opponent variables before this position
    std::uint64_t offset;        // first label index (owned positions only)
  };

  const Prefix& prefix() const { return prefix_; }
  Player role() const { return role_; }
  std::span<const Position> positions() const { return positions_; }
  std::uint32_t opponent_count() const { return opponent_count_; }
  std::uint64_t path_count() const { return std::uint64_t{1} << opponent_count_; }
  /// Σ over owner positions of 2^(opponent variables before it).
  const BigInt& label_count() const { return label_count_; }
  /// label_count as a machine integer; throws SizeError above 62.
  std::uint64_t label_count_small() const;

  friend bool operator==(const StrategyShape& a, const StrategyShape& b) {
    return a.role_ == b.role_ && a.prefix_ == b.prefix_;
  }

 private:
  Prefix prefix_;
  Player role_;
  std::vector<Position> positions_;
  std::uint32_t opponent_count_ = 0;
  BigInt label_count_ = 0;
};

/// Strategy tree stored as its owner edge labels.
class Strategy {
 public:
  Strategy(std::shared_ptr<const StrategyShape> shape, std::vector<bool> labels);

  /// Strategy number `index` in enumeration order: label p is bit
  /// (L-1-p) of `index`, L = label count.
  static Strategy from_index(std::shared_ptr<const StrategyShape> shape,
                             std::uint64_t index);

  const StrategyShape& shape() const { return *shape_; }
  std::shared_ptr<const StrategyShape> shape_ptr() const { return shape_; }
  Player role() const { return shape_->role(); }
  const std::vector<bool>& labels() const { return labels_; }

  /// Label chosen at owner position `position` after opponent history `history`.
  bool label(std::size_t position, std::uint64_t history) const;

  /// Total assignment of the path selected by the opponent's choices, packed
  /// (bit v-1 = variable v). Opponent choice j is bit (K-1-j) of `choices`.
  std::uint64_t path_mask(std::uint64_t choices) const;
  /// All paths, in increasing order of opponent choices.
  std::vector<std::uint64_t> path_masks() const;
  std::vector<Assignment> paths() const;

  /// Whether the assignment is a path of this tree.
  bool has_path(const Assignment& sigma) const;

  std::string to_string() const;

  friend bool operator==(const Strategy& a, const Strategy& b) {
    return *a.shape_ == *b.shape_ && a.labels_ == b.labels_;
  }

 private:
  std::shared_ptr<const StrategyShape> shape_;
  std::vector<bool> labels_;
};

/// Number of strategies of `role` for `prefix`, 2^(label count).
struct StrategyCount {
  BigInt exponent;

  BigInt value() const;  // throws SizeError when the exponent exceeds 2^16
  bool at_most(std::uint64_t cap) const;
  std::string to_string() const;
};

StrategyCount count_strategies(const Prefix& prefix, Player role);

/// Single-consumer stream over all strategies in lexicographic label order.
class StrategyStream {
 public:
  /// Throws SizeError naming the count when it exceeds `cap`.
  StrategyStream(const Prefix& prefix, Player role, std::uint64_t cap = 1u << 20);

  std::optional<Strategy> next();
  std::uint64_t total() const { return total_; }
  std::shared_ptr<const StrategyShape> shape() const { return shape_; }

 private:
  std::shared_ptr<const StrategyShape> shape_;
  std::uint64_t total_ = 0;
  std::uint64_t next_ = 0;
};

std::vector<Strategy> enumerate_strategies(const Prefix& prefix, Player role,
                                           std::uint64_t cap = 1u << 20);

/// ⋀ over paths (existential) or ⋁ over paths (universal) of the matrix.
/// Throws ValidationError when the strategy was built for another prefix.
bool strategy_value(const Prefix& prefix, const Formula& matrix, const Strategy& s);
bool strategy_value(const QbfInstance& instance, const Strategy& s);

/// Whether `s` wins for its owner: value ⊤ for ∃, ⊥ for ∀.
bool is_winning(const Prefix& prefix, const Formula& matrix, const Strategy& s);

struct TruthOptions {
  std::size_t max_vars = 24;
};

/// Recursive QBF semantics with short-circuiting. The CNF and CNF∨DNF
/// overloads also prune on decided clauses/cubes and propagate forced
/// literals. All throw SizeError when the prefix exceeds `max_vars` and
/// ValidationError when the matrix mentions unquantified variables.
bool qbf_truth(const QbfInstance& instance, const TruthOptions& options = {});
/// Truth of P.(φ ∨ ⋁cubes) with φ the instance's CNF matrix. The cube
/// variables must be quantified in the instance prefix.
bool qbf_truth(const QbfInstance& instance, std::span<const Cube> cubes,
               const TruthOptions& options = {});
bool qbf_truth(const Prefix& prefix, const Formula& matrix,
               const TruthOptions& options = {});

/// A path shared by an existential and a universal strategy of one prefix,
/// built level by level: each level follows whichever tree owns it.
Assignment common_path(const Strategy& existential, const Strategy& universal);

struct OrbitOptions {
  std::uint64_t strategy_cap = 1u << 20;
  std::size_t group_cap = 10000;
};

/// Strategies of one role grouped into orbits of the associated semantic
/// group.
struct OrbitPartition {
  std::vector<Strategy> strategies;            // enumeration order
  std::vector<std::vector<std::size_t>> orbits;  // indices into strategies
  std::vector<std::size_t> orbit_of;           // strategy index -> orbit index
};

/// s ~ s' when every path of s' is sent by some element of ⟨generators⟩ to
/// a path of s, and vice versa. Both directions together mean s and s' hit
/// the same set of assignment orbits, which is how the relation is computed.
/// Orbits are listed by smallest member.
OrbitPartition semantic_orbits(const Prefix& prefix,
                               std::span<const SignedPermutation> generators,
                               Player role, const OrbitOptions& options = {});

}  // namespace qsym
