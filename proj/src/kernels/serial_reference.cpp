#include "qsym/error.hpp"
#include "qsym/kernels.hpp"

namespace qsym::kernels {

bool equivalent_serial(const Formula& a, const Formula& b, std::span<const Var> vars) {
  if (vars.size() > 62) throw SizeError("too many variables for a truth table");
  const std::uint64_t rows = std::uint64_t{1} << vars.size();
  Assignment sigma;
  for (std::uint64_t row = 0; row < rows; ++row) {
    for (std::size_t j = 0; j < vars.size(); ++j) sigma.set(vars[j], (row >> j) & 1u);
    if (evaluate(a, sigma) != evaluate(b, sigma)) return false;
  }
  return true;
}

std::uint64_t count_winning_serial(const Prefix& prefix, const Formula& matrix, Player role,
                                   std::uint64_t cap) {
  StrategyStream stream(prefix, role, cap);
  std::uint64_t wins = 0;
  while (auto s = stream.next())
    if (is_winning(prefix, matrix, *s)) ++wins;
  return wins;
}

bool exists_winning_serial(const Prefix& prefix, const Formula& matrix, Player role,
                           std::uint64_t cap) {
  StrategyStream stream(prefix, role, cap);
  while (auto s = stream.next())
    if (is_winning(prefix, matrix, *s)) return true;
  return false;
}

}  // namespace qsym::kernels
