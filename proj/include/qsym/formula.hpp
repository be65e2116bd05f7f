#pragma once

#include <compare>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace qsym {

/// Propositional variable, numbered from 1 as in QDIMACS.
using Var = int;

/// A variable with a polarity, stored in DIMACS form (+v / -v).
class Literal {
 public:
  constexpr Literal() = default;
  constexpr explicit Literal(int dimacs) : value_(dimacs) {}

  static constexpr Literal positive(Var v) { return Literal(v); }
  static constexpr Literal negative(Var v) { return Literal(-v); }
  static constexpr Literal of(Var v, bool negated) {
    return Literal(negated ? -v : v);
  }

  constexpr Var var() const { return value_ < 0 ? -value_ : value_; }
  constexpr bool is_negative() const { return value_ < 0; }
  constexpr int dimacs() const { return value_; }

  constexpr Literal operator-() const { return Literal(-value_); }
  constexpr Literal operator^(bool flip) const {
    return flip ? Literal(-value_) : *this;
  }

  friend constexpr bool operator==(Literal, Literal) = default;
  /// Orders by variable, positive before negative.
  friend constexpr std::strong_ordering operator<=>(Literal a, Literal b) {
    if (auto c = a.var() <=> b.var(); c != 0) return c;
    return a.is_negative() <=> b.is_negative();
  }

 private:
  int value_ = 0;
};

/// Truth values over an explicit domain of variables. Reading a variable
/// outside the domain throws MissingAssignmentError.
class Assignment {
 public:
  Assignment() = default;

  /// Total assignment over 1..num_vars taken from the low bits of `mask`
  /// (bit v-1 holds variable v).
  static Assignment from_mask(Var num_vars, std::uint64_t mask);

  void set(Var v, bool value);
  void unset(Var v);
  bool has(Var v) const {
    return v >= 1 && static_cast<std::size_t>(v) < values_.size() &&
           values_[v] >= 0;
  }
  bool get(Var v) const;
  bool value(Literal lit) const { return get(lit.var()) != lit.is_negative(); }

  /// Largest variable id the storage covers (not necessarily assigned).
  Var max_var() const { return values_.empty() ? 0 : Var(values_.size() - 1); }
  std::vector<Var> domain() const;
  std::size_t size() const;

  /// Packs variables 1..64 into a mask; unassigned variables read as 0.
  std::uint64_t to_mask() const;

  friend bool operator==(const Assignment& a, const Assignment& b);

  std::string to_string() const;

 private:
  std::vector<std::int8_t> values_;  // -1 unassigned
};

enum class Connective : std::uint8_t {
  True,
  False,
  Variable,
  Not,
  And,
  Or,
  Iff,
  Implies,
  Xor,
};

/// Immutable Boolean formula tree. Nodes are shared between copies.
class Formula {
 public:
  Formula();  // ⊤

  static Formula top();
  static Formula bottom();
  static Formula constant(bool value) { return value ? top() : bottom(); }
  static Formula var(Var v);
  static Formula literal(Literal lit);
  static Formula negation(Formula f);
  static Formula conj(std::vector<Formula> children);
  static Formula disj(std::vector<Formula> children);
  static Formula iff(Formula a, Formula b);
  static Formula implies(Formula a, Formula b);
  static Formula exclusive_or(Formula a, Formula b);

  /// Conjunction of clauses / disjunction of cubes.
  static Formula from_clauses(std::span<const std::vector<Literal>> clauses);
  static Formula from_cubes(std::span<const std::vector<Literal>> cubes);

  Connective kind() const;
  Var variable() const;  // only for Connective::Variable
  std::span<const Formula> children() const;

  bool is_true() const { return kind() == Connective::True; }
  bool is_false() const { return kind() == Connective::False; }

  std::size_t node_count() const;
  std::string to_string() const;

  friend bool structurally_equal(const Formula& a, const Formula& b);

 private:
  struct Node;
  explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  static Formula make(Connective kind, Var v, std::vector<Formula> children);

  std::shared_ptr<const Node> node_;
};

inline Formula operator!(const Formula& f) { return Formula::negation(f); }
inline Formula operator&&(const Formula& a, const Formula& b) {
  return Formula::conj({a, b});
}
inline Formula operator||(const Formula& a, const Formula& b) {
  return Formula::disj({a, b});
}

/// Standard truth-functional value. Throws MissingAssignmentError when a
/// variable of `f` is unassigned.
bool evaluate(const Formula& f, const Assignment& assignment);

/// Three-valued evaluation: nullopt when the value depends on unassigned
/// variables.
std::optional<bool> evaluate_partial(const Formula& f,
                                     const Assignment& assignment);

/// Replaces every assigned variable by its truth value and folds constants.
/// The result mentions no variable of the assignment's domain.
Formula substitute(const Formula& f, const Assignment& partial);

/// Replaces each variable v by `image(v)`.
Formula rename(const Formula& f, const std::function<Formula(Var)>& image);

/// Sorted, duplicate-free variable ids occurring in `f`.
std::vector<Var> variables(const Formula& f);

struct EquivalenceOptions {
  std::size_t max_vars = 20;
  bool parallel = true;
};

/// Truth-table comparison over all assignments to `vars`. Throws SizeError
/// when |vars| exceeds the cap and MissingAssignmentError when a formula
/// mentions a variable outside `vars`.
bool equivalent(const Formula& a, const Formula& b, std::span<const Var> vars,
                const EquivalenceOptions& options = {});

/// Same, over the union of both formulas' variables.
bool equivalent(const Formula& a, const Formula& b,
                const EquivalenceOptions& options = {});

}  // namespace qsym
