#include <algorithm>
#include <atomic>
#include <omp.h>

#include "qsym/error.hpp"
#include "qsym/kernels.hpp"

namespace qsym::kernels {
namespace {

void require_covered(const Formula& f, std::span<const Var> vars) {
  for (Var v : variables(f))
    if (std::find(vars.begin(), vars.end(), v) == vars.end()) throw MissingAssignmentError(v);
}

// Packs strategy number `index` into explicit labels for fast path walks.
struct PackedWalker {
  const StrategyShape& shape;
  std::uint64_t label_count;

  std::uint64_t path(std::uint64_t index, std::uint64_t choices) const {
    const std::uint32_t k = shape.opponent_count();
    std::uint32_t seen = 0;
    std::uint64_t mask = 0;
    for (const auto& p : shape.positions()) {
      bool value;
      if (p.owned) {
        const std::uint64_t history = p.history_bits == 0 ? 0 : choices >> (k - p.history_bits);
        value = (index >> (label_count - 1 - (p.offset + history))) & 1u;
      } else {
        value = (choices >> (k - 1 - seen)) & 1u;
        ++seen;
      }
      if (value) mask |= std::uint64_t{1} << (p.var - 1);
    }
    return mask;
  }
};

template <class Matrix>
bool wins(const PackedWalker& walker, const Matrix& matrix, std::uint64_t index, bool existential) {
  const std::uint64_t paths = walker.shape.path_count();
  for (std::uint64_t c = 0; c < paths; ++c) {
    const bool value = matrix.evaluate_mask(walker.path(index, c));
    // existential wins when every path satisfies, universal when one falsifies
    if (existential != value) return false;
  }
  return true;
}

struct Setup {
  std::shared_ptr<const StrategyShape> shape;
  std::uint64_t total;
  std::uint64_t labels;
};

Setup prepare(const Prefix& prefix, Player role, std::uint64_t cap) {
  StrategyStream stream(prefix, role, cap);  // validates the cap
  auto shape = stream.shape();
  return {shape, stream.total(), shape->label_count_small()};
}

template <class Matrix>
std::uint64_t count_with(const Setup& setup, const Matrix& matrix, Player role) {
  const PackedWalker walker{*setup.shape, setup.labels};
  const bool existential = role == Player::Existential;
  const auto total = static_cast<long long>(setup.total);
  std::uint64_t count = 0;
#pragma omp parallel for schedule(dynamic, 64) reduction(+ : count)
  for (long long i = 0; i < total; ++i)
    if (wins(walker, matrix, static_cast<std::uint64_t>(i), existential)) ++count;
  return count;
}

template <class Matrix>
bool exists_with(const Setup& setup, const Matrix& matrix, Player role) {
  const PackedWalker walker{*setup.shape, setup.labels};
  const bool existential = role == Player::Existential;
  const auto total = static_cast<long long>(setup.total);
  std::atomic<bool> found{false};
#pragma omp parallel for schedule(dynamic, 64)
  for (long long i = 0; i < total; ++i) {
    if (found.load(std::memory_order_relaxed)) continue;
    if (wins(walker, matrix, static_cast<std::uint64_t>(i), existential))
      found.store(true, std::memory_order_relaxed);
  }
  return found.load();
}

}  // namespace

bool equivalent_parallel(const Formula& a, const Formula& b, std::span<const Var> vars) {
  if (vars.size() > 62) throw SizeError("too many variables for a truth table");
  require_covered(a, vars);
  require_covered(b, vars);
  const CompiledFormula ca(a), cb(b);
  Var top = std::max(ca.max_var(), cb.max_var());
  for (Var v : vars) top = std::max(top, v);

  const std::size_t k = vars.size();
  const std::uint64_t rows = std::uint64_t{1} << k;
  const std::uint64_t valid = rows >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << rows) - 1;
  const auto chunks = static_cast<long long>(rows >= 64 ? rows / 64 : 1);
  // low six row bits vary inside a word
  static constexpr std::uint64_t kPattern[6] = {
      0xAAAAAAAAAAAAAAAAull, 0xCCCCCCCCCCCCCCCCull, 0xF0F0F0F0F0F0F0F0ull,
      0xFF00FF00FF00FF00ull, 0xFFFF0000FFFF0000ull, 0xFFFFFFFF00000000ull};

  std::atomic<bool> differ{false};
#pragma omp parallel
  {
    std::vector<std::uint64_t> words(static_cast<std::size_t>(top) + 1, 0);
#pragma omp for schedule(static)
    for (long long chunk = 0; chunk < chunks; ++chunk) {
      if (differ.load(std::memory_order_relaxed)) continue;
      const std::uint64_t base = static_cast<std::uint64_t>(chunk) * 64;
      for (std::size_t j = 0; j < k; ++j)
        words[vars[j]] = j < 6 ? kPattern[j] : (((base >> j) & 1u) ? ~std::uint64_t{0} : 0);
      if (((ca.evaluate_words(words) ^ cb.evaluate_words(words)) & valid) != 0)
        differ.store(true, std::memory_order_relaxed);
    }
  }
  return !differ.load();
}

std::uint64_t count_winning_parallel(const Prefix& prefix, const Formula& matrix, Player role,
                                     std::uint64_t cap) {
  const Setup setup = prepare(prefix, role, cap);
  require_covered(matrix, prefix.order());
  return count_with(setup, CompiledFormula(matrix), role);
}

std::uint64_t count_winning_parallel(const QbfInstance& instance, Player role, std::uint64_t cap) {
  const Setup setup = prepare(instance.prefix, role, cap);
  for (const auto& clause : instance.matrix)
    for (Literal l : clause)
      if (!instance.prefix.contains(l.var())) throw MissingAssignmentError(l.var());
  return count_with(setup, CompiledCnf(instance.matrix), role);
}

bool exists_winning_parallel(const QbfInstance& instance, Player role, std::uint64_t cap) {
  const Setup setup = prepare(instance.prefix, role, cap);
  for (const auto& clause : instance.matrix)
    for (Literal l : clause)
      if (!instance.prefix.contains(l.var())) throw MissingAssignmentError(l.var());
  return exists_with(setup, CompiledCnf(instance.matrix), role);
}

int max_threads() { return omp_get_max_threads(); }

}  // namespace qsym::kernels
