#include <algorithm>

#include "qsym/error.hpp"
#include "qsym/strategy.hpp"

namespace qsym {
namespace {

void check_size(const Prefix& prefix, const TruthOptions& options) {
  if (prefix.size() > options.max_vars)
    throw SizeError("prefix has " + std::to_string(prefix.size()) +
                    " variables, above the solver cap of " + std::to_string(options.max_vars));
}

void check_bound(const Prefix& prefix, std::span<const std::vector<Literal>> rows,
                 const char* what) {
  for (const auto& row : rows)
    for (Literal l : row)
      if (!prefix.contains(l.var()))
        throw ValidationError(std::string(what) + " variable " + std::to_string(l.var()) +
                              " is not quantified");
}

// Search over P.(C ∨ D), C a clause set and D a cube set (empty D is ⊥).
class Search {
 public:
  Search(const Prefix& prefix, std::span<const Clause> clauses, std::span<const Cube> cubes)
      : prefix_(prefix), order_(prefix.order()), clauses_(clauses), cubes_(cubes) {
    values_.assign(static_cast<std::size_t>(prefix.max_var()) + 1, -1);
    exists_.assign(values_.size(), false);
    for (Var v : order_) exists_[v] = prefix.quantifier_of(v) == Quantifier::Exists;
  }

  bool run() { return solve(0); }

 private:
  int lit_value(Literal l) const {
    const int v = values_[l.var()];
    if (v < 0) return -1;
    return l.is_negative() ? 1 - v : v;
  }

  struct Status {
    std::optional<bool> decided;
    Literal forced{1};
    bool has_forced = false;
  };

  // Counts over one row: true literals, unassigned literals (and the last
  // one seen), unassigned existential literals.
  struct RowState {
    int true_count = 0;
    int false_count = 0;
    int open = 0;
    int open_exists = 0;
    Literal last{1};
  };

  RowState row_state(const std::vector<Literal>& row) const {
    RowState s;
    for (Literal l : row) {
      const int v = lit_value(l);
      if (v == 1) ++s.true_count;
      else if (v == 0) ++s.false_count;
      else {
        ++s.open;
        if (exists_[l.var()]) ++s.open_exists;
        s.last = l;
      }
    }
    return s;
  }

  Status status() const {
    bool cnf_true = true, cnf_false = false;
    for (const auto& clause : clauses_) {
      const RowState s = row_state(clause);
      if (s.true_count > 0) continue;
      cnf_true = false;
      if (s.open == 0) {
        cnf_false = true;
        break;
      }
    }
    if (cnf_true) return {true};

    bool dnf_true = false, dnf_false = true;
    for (const auto& cube : cubes_) {
      const RowState s = row_state(cube);
      if (s.false_count > 0) continue;
      dnf_false = false;
      if (s.open == 0) {
        dnf_true = true;
        break;
      }
    }
    if (dnf_true) return {true};
    if (cnf_false && dnf_false) return {false};

    Status out;
    if (dnf_false) {
      // matrix is C from here on
      for (const auto& clause : clauses_) {
        const RowState s = row_state(clause);
        if (s.true_count > 0) continue;
        if (s.open_exists == 0) return {false};
        if (s.open == 1 && !out.has_forced) {
          out.forced = s.last;
          out.has_forced = true;
        }
      }
    } else if (cnf_false) {
      // matrix is D from here on
      for (const auto& cube : cubes_) {
        const RowState s = row_state(cube);
        if (s.false_count > 0) continue;
        if (s.open_exists == s.open) return {true};
        if (s.open == 1 && !out.has_forced) {
          out.forced = -s.last;
          out.has_forced = true;
        }
      }
    }
    return out;
  }

  bool solve(std::size_t pos) {
    std::vector<Var> trail;
    bool result = false;
    for (;;) {
      const Status st = status();
      if (st.decided) {
        result = *st.decided;
        break;
      }
      if (st.has_forced) {
        values_[st.forced.var()] = st.forced.is_negative() ? 0 : 1;
        trail.push_back(st.forced.var());
        continue;
      }
      while (pos < order_.size() && values_[order_[pos]] >= 0) ++pos;
      // status() decides every total assignment
      const Var v = order_[pos];
      const bool exists = exists_[v];
      result = !exists;
      for (int value = 0; value < 2; ++value) {
        values_[v] = static_cast<std::int8_t>(value);
        const bool sub = solve(pos + 1);
        if (sub == exists) {
          result = exists;
          break;
        }
      }
      values_[v] = -1;
      break;
    }
    for (Var v : trail) values_[v] = -1;
    return result;
  }

  const Prefix& prefix_;
  std::vector<Var> order_;
  std::span<const Clause> clauses_;
  std::span<const Cube> cubes_;
  std::vector<std::int8_t> values_;
  std::vector<bool> exists_;
};

bool formula_truth(const std::vector<Var>& order, const Prefix& prefix, const Formula& matrix,
                   Assignment& sigma, std::size_t pos) {
  if (auto value = evaluate_partial(matrix, sigma)) return *value;
  const Var v = order[pos];
  const bool exists = prefix.quantifier_of(v) == Quantifier::Exists;
  bool result = !exists;
  for (int value = 0; value < 2; ++value) {
    sigma.set(v, value == 1);
    if (formula_truth(order, prefix, matrix, sigma, pos + 1) == exists) {
      result = exists;
      break;
    }
  }
  sigma.unset(v);
  return result;
}

}  // namespace

bool qbf_truth(const QbfInstance& instance, const TruthOptions& options) {
  return qbf_truth(instance, std::span<const Cube>{}, options);
}

bool qbf_truth(const QbfInstance& instance, std::span<const Cube> cubes,
               const TruthOptions& options) {
  check_size(instance.prefix, options);
  check_bound(instance.prefix, instance.matrix, "matrix");
  check_bound(instance.prefix, cubes, "cube");
  return Search(instance.prefix, instance.matrix, cubes).run();
}

bool qbf_truth(const Prefix& prefix, const Formula& matrix, const TruthOptions& options) {
  check_size(prefix, options);
  for (Var v : variables(matrix))
    if (!prefix.contains(v))
      throw ValidationError("matrix variable " + std::to_string(v) + " is not quantified");
  Assignment sigma;
  return formula_truth(prefix.order(), prefix, matrix, sigma, 0);
}

}  // namespace qsym
