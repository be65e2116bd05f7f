#include "qsym/instance.hpp"

#include <algorithm>
#include <sstream>

#include "qsym/error.hpp"

namespace qsym {

Prefix::Prefix(std::vector<QuantifierBlock> blocks) {
  for (auto& block : blocks)
    for (Var v : block.variables) append(block.quantifier, v);
}

void Prefix::index_block(std::size_t b) {
  for (Var v : blocks_[b].variables) {
    if (static_cast<std::size_t>(v) >= block_index_.size()) block_index_.resize(v + 1, -1);
    block_index_[v] = int(b);
  }
}

void Prefix::append(Quantifier q, Var v) {
  if (v < 1) throw ValidationError("variable ids start at 1, got " + std::to_string(v));
  if (contains(v))
    throw ValidationError("variable " + std::to_string(v) + " is quantified twice");
  if (blocks_.empty() || blocks_.back().quantifier != q) blocks_.push_back({q, {}});
  blocks_.back().variables.push_back(v);
  if (static_cast<std::size_t>(v) >= block_index_.size()) block_index_.resize(v + 1, -1);
  block_index_[v] = int(blocks_.size() - 1);
  ++size_;
}

std::vector<Var> Prefix::order() const {
  std::vector<Var> out;
  out.reserve(size_);
  for (const auto& block : blocks_)
    out.insert(out.end(), block.variables.begin(), block.variables.end());
  return out;
}

Quantifier Prefix::quantifier_of(Var v) const {
  const int b = block_of(v);
  if (b < 0) throw ValidationError("variable " + std::to_string(v) + " is not quantified");
  return blocks_[b].quantifier;
}

Prefix Prefix::flipped() const {
  Prefix out = *this;
  for (auto& block : out.blocks_) block.quantifier = flip(block.quantifier);
  return out;
}

std::string Prefix::to_string() const {
  std::ostringstream out;
  for (const auto& block : blocks_) {
    out << (block.quantifier == Quantifier::Exists ? "E" : "A");
    for (Var v : block.variables) out << ' ' << v;
    out << "; ";
  }
  return out.str();
}

namespace {

std::optional<Clause> dedupe(const Clause& literals) {
  Clause out;
  out.reserve(literals.size());
  for (Literal l : literals) {
    if (std::find(out.begin(), out.end(), l) != out.end()) continue;
    if (std::find(out.begin(), out.end(), -l) != out.end()) return std::nullopt;
    out.push_back(l);
  }
  return out;
}

}  // namespace

std::optional<Clause> normalize_clause(const Clause& clause) { return dedupe(clause); }
std::optional<Cube> normalize_cube(const Cube& cube) { return dedupe(cube); }

Clause sorted_literals(Clause clause) {
  std::sort(clause.begin(), clause.end());
  return clause;
}

bool QbfInstance::structurally_equal(const QbfInstance& other) const {
  return num_vars == other.num_vars && prefix == other.prefix && matrix == other.matrix;
}

std::vector<Var> QbfInstance::unused_variables() const {
  std::vector<bool> used(static_cast<std::size_t>(std::max(num_vars, prefix.max_var())) + 1);
  for (const auto& clause : matrix)
    for (Literal l : clause) used[l.var()] = true;
  std::vector<Var> out;
  for (Var v : prefix.order())
    if (!used[v]) out.push_back(v);
  return out;
}

void QbfInstance::validate() const {
  if (prefix.max_var() > num_vars)
    throw ValidationError("prefix mentions variable " + std::to_string(prefix.max_var()) +
                          " beyond the declared " + std::to_string(num_vars));
  for (const auto& clause : matrix) {
    for (Literal l : clause) {
      if (l.var() < 1 || l.var() > num_vars)
        throw ValidationError("literal " + std::to_string(l.dimacs()) + " out of range");
      if (!prefix.contains(l.var()))
        throw ValidationError("variable " + std::to_string(l.var()) + " is free");
    }
    auto normalized = normalize_clause(clause);
    if (!normalized || *normalized != clause)
      throw ValidationError("clause is not normalized");
  }
}

}  // namespace qsym
