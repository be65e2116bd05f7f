#include "qsym/strategy.hpp"

#include <algorithm>
#include <map>
#include <unordered_map>

#include "qsym/error.hpp"

namespace qsym {

// ---- shape ----

StrategyShape::StrategyShape(const Prefix& prefix, Player role) : prefix_(prefix), role_(role) {
  if (prefix.max_var() > 64)
    throw SizeError("strategy trees are limited to variable ids up to 64");
  const Quantifier owned = owned_quantifier(role);
  std::uint64_t offset = 0;
  for (const auto& block : prefix.blocks()) {
    for (Var v : block.variables) {
      Position p{v, block.quantifier == owned, opponent_count_, 0};
      if (p.owned) {
        p.offset = offset;
        const BigInt width = BigInt(1) << opponent_count_;
        label_count_ += width;
        // offsets are only meaningful while the labels fit in memory
        offset = label_count_ <= BigInt(std::numeric_limits<std::uint64_t>::max())
                     ? static_cast<std::uint64_t>(label_count_)
                     : std::numeric_limits<std::uint64_t>::max();
      } else {
        if (++opponent_count_ > 62)
          throw SizeError("strategy trees are limited to 62 opponent variables");
      }
      positions_.push_back(p);
    }
  }
}

std::uint64_t StrategyShape::label_count_small() const {
  if (label_count_ > 62) throw SizeError("strategy has " + label_count_.str() + " edge labels");
  return static_cast<std::uint64_t>(label_count_);
}

// ---- strategy ----

Strategy::Strategy(std::shared_ptr<const StrategyShape> shape, std::vector<bool> labels)
    : shape_(std::move(shape)), labels_(std::move(labels)) {
  if (BigInt(labels_.size()) != shape_->label_count())
    throw ValidationError("strategy needs " + shape_->label_count().str() + " labels, got " +
                          std::to_string(labels_.size()));
}

Strategy Strategy::from_index(std::shared_ptr<const StrategyShape> shape, std::uint64_t index) {
  const std::uint64_t count = shape->label_count_small();
  std::vector<bool> labels(count);
  for (std::uint64_t p = 0; p < count; ++p) labels[p] = (index >> (count - 1 - p)) & 1u;
  return Strategy(std::move(shape), std::move(labels));
}

bool Strategy::label(std::size_t position, std::uint64_t history) const {
  const auto& p = shape_->positions()[position];
  return labels_[p.offset + history];
}

std::uint64_t Strategy::path_mask(std::uint64_t choices) const {
  const std::uint32_t k = shape_->opponent_count();
  std::uint32_t seen = 0;
  std::uint64_t mask = 0;
  for (const auto& p : shape_->positions()) {
    bool value;
    if (p.owned) {
      const std::uint64_t history = p.history_bits == 0 ? 0 : choices >> (k - p.history_bits);
      value = labels_[p.offset + history];
    } else {
      value = (choices >> (k - 1 - seen)) & 1u;
      ++seen;
    }
    if (value) mask |= std::uint64_t{1} << (p.var - 1);
  }
  return mask;
}

std::vector<std::uint64_t> Strategy::path_masks() const {
  std::vector<std::uint64_t> out;
  out.reserve(shape_->path_count());
  for (std::uint64_t c = 0; c < shape_->path_count(); ++c) out.push_back(path_mask(c));
  return out;
}

namespace {

Assignment unpack(const Prefix& prefix, std::uint64_t mask) {
  Assignment sigma;
  for (const auto& block : prefix.blocks())
    for (Var v : block.variables) sigma.set(v, (mask >> (v - 1)) & 1u);
  return sigma;
}

}  // namespace

std::vector<Assignment> Strategy::paths() const {
  std::vector<Assignment> out;
  for (std::uint64_t mask : path_masks()) out.push_back(unpack(shape_->prefix(), mask));
  return out;
}

bool Strategy::has_path(const Assignment& sigma) const {
  std::uint64_t choices = 0;
  std::uint64_t mask = 0;
  for (const auto& p : shape_->positions()) {
    const bool value = sigma.get(p.var);
    if (!p.owned) choices = (choices << 1) | (value ? 1u : 0u);
    if (value) mask |= std::uint64_t{1} << (p.var - 1);
  }
  return path_mask(choices) == mask;
}

std::string Strategy::to_string() const {
  std::string out = role() == Player::Existential ? "E[" : "A[";
  for (bool b : labels_) out += b ? '1' : '0';
  return out + "]";
}

// ---- counting and enumeration ----

BigInt StrategyCount::value() const {
  if (exponent > 65536) throw SizeError("strategy count 2^" + exponent.str() + " is too large");
  return BigInt(1) << static_cast<unsigned>(exponent);
}

bool StrategyCount::at_most(std::uint64_t cap) const {
  if (exponent >= 64) return false;
  return (std::uint64_t{1} << static_cast<unsigned>(exponent)) <= cap;
}

std::string StrategyCount::to_string() const {
  if (exponent <= 256) return value().str();
  return "2^" + exponent.str();
}

StrategyCount count_strategies(const Prefix& prefix, Player role) {
  const Quantifier owned = owned_quantifier(role);
  StrategyCount count{0};
  unsigned opponents = 0;
  for (const auto& block : prefix.blocks()) {
    for (std::size_t i = 0; i < block.variables.size(); ++i) {
      if (block.quantifier == owned) count.exponent += BigInt(1) << opponents;
      else ++opponents;
    }
  }
  return count;
}

StrategyStream::StrategyStream(const Prefix& prefix, Player role, std::uint64_t cap) {
  const StrategyCount count = count_strategies(prefix, role);
  if (!count.at_most(cap))
    throw SizeError("prefix has " + count.to_string() + " " +
                    (role == Player::Existential ? "existential" : "universal") +
                    " strategies, above the cap of " + std::to_string(cap));
  shape_ = std::make_shared<const StrategyShape>(prefix, role);
  total_ = std::uint64_t{1} << shape_->label_count_small();
}

std::optional<Strategy> StrategyStream::next() {
  if (next_ >= total_) return std::nullopt;
  return Strategy::from_index(shape_, next_++);
}

std::vector<Strategy> enumerate_strategies(const Prefix& prefix, Player role, std::uint64_t cap) {
  StrategyStream stream(prefix, role, cap);
  std::vector<Strategy> out;
  out.reserve(stream.total());
  while (auto s = stream.next()) out.push_back(std::move(*s));
  return out;
}

// ---- values ----

bool strategy_value(const Prefix& prefix, const Formula& matrix, const Strategy& s) {
  if (!(s.shape().prefix() == prefix))
    throw ValidationError("strategy was built for a different prefix");
  const bool existential = s.role() == Player::Existential;
  // no early exit: every path is evaluated so unbound variables always surface
  bool value = existential;
  for (std::uint64_t mask : s.path_masks()) {
    const bool path_value = evaluate(matrix, unpack(prefix, mask));
    value = existential ? (value && path_value) : (value || path_value);
  }
  return value;
}

bool strategy_value(const QbfInstance& instance, const Strategy& s) {
  return strategy_value(instance.prefix, instance.matrix_formula(), s);
}

bool is_winning(const Prefix& prefix, const Formula& matrix, const Strategy& s) {
  const bool value = strategy_value(prefix, matrix, s);
  return s.role() == Player::Existential ? value : !value;
}

// ---- common path ----

Assignment common_path(const Strategy& existential, const Strategy& universal) {
  if (existential.role() != Player::Existential || universal.role() != Player::Universal)
    throw ValidationError("common_path takes an existential and a universal strategy");
  if (!(existential.shape().prefix() == universal.shape().prefix()))
    throw ValidationError("strategies belong to different prefixes");

  Assignment path;
  std::uint64_t exists_history = 0;  // history seen by the universal tree
  std::uint64_t forall_history = 0;  // history seen by the existential tree
  const auto positions = existential.shape().positions();
  for (std::size_t i = 0; i < positions.size(); ++i) {
    bool value;
    if (positions[i].owned) {
      value = existential.label(i, forall_history);
      exists_history = (exists_history << 1) | (value ? 1u : 0u);
    } else {
      value = universal.label(i, exists_history);
      forall_history = (forall_history << 1) | (value ? 1u : 0u);
    }
    path.set(positions[i].var, value);
  }
  return path;
}

// ---- semantic orbits ----

OrbitPartition semantic_orbits(const Prefix& prefix,
                               std::span<const SignedPermutation> generators, Player role,
                               const OrbitOptions& options) {
  for (const auto& g : generators)
    if (!is_block_respecting(g, prefix))
      throw ValidationError("generator " + to_cycle_notation(g) + " is not admissible");

  OrbitPartition partition;
  partition.strategies = enumerate_strategies(prefix, role, options.strategy_cap);
  const std::vector<SignedPermutation> group = group_closure(generators, options.group_cap);

  std::unordered_map<std::uint64_t, std::uint64_t> canonical;
  auto representative = [&](std::uint64_t mask) {
    auto it = canonical.find(mask);
    if (it != canonical.end()) return it->second;
    std::uint64_t best = mask;
    for (const auto& g : group) best = std::min(best, g.apply_mask(mask));
    canonical.emplace(mask, best);
    return best;
  };

  std::map<std::vector<std::uint64_t>, std::size_t> orbit_index;
  partition.orbit_of.resize(partition.strategies.size());
  for (std::size_t i = 0; i < partition.strategies.size(); ++i) {
    std::vector<std::uint64_t> signature;
    for (std::uint64_t mask : partition.strategies[i].path_masks())
      signature.push_back(representative(mask));
    std::sort(signature.begin(), signature.end());
    signature.erase(std::unique(signature.begin(), signature.end()), signature.end());
    auto [it, inserted] = orbit_index.emplace(std::move(signature), partition.orbits.size());
    if (inserted) partition.orbits.emplace_back();
    partition.orbits[it->second].push_back(i);
    partition.orbit_of[i] = it->second;
  }
  return partition;
}

}  // namespace qsym
