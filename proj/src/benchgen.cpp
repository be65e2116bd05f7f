#include "qsym/benchgen.hpp"

#include <algorithm>
#include <cctype>
#include <random>

#include "qsym/error.hpp"

namespace qsym {

QbfInstance gen_kbkf(int n) {
  if (n < 1) throw ValidationError("KBKF needs n >= 1");
  // ids in prefix order: d0, then (di, ei, xi) for i = 1..n, then f1..fn
  const Var d0 = 1;
  auto d = [](int i) { return Var(3 * i - 1); };
  auto e = [](int i) { return Var(3 * i); };
  auto x = [](int i) { return Var(3 * i + 1); };
  auto f = [n](int i) { return Var(3 * n + 1 + i); };

  QbfInstance q;
  q.num_vars = 4 * n + 1;
  q.prefix.append(Quantifier::Exists, d0);
  for (int i = 1; i <= n; ++i) {
    q.prefix.append(Quantifier::Exists, d(i));
    q.prefix.append(Quantifier::Exists, e(i));
    q.prefix.append(Quantifier::Forall, x(i));
  }
  for (int i = 1; i <= n; ++i) q.prefix.append(Quantifier::Exists, f(i));

  auto pos = [](Var v) { return Literal::positive(v); };
  auto neg = [](Var v) { return Literal::negative(v); };
  q.matrix.push_back({neg(d0)});
  q.matrix.push_back({pos(d0), neg(d(1)), neg(e(1))});
  for (int i = 1; i < n; ++i) {
    q.matrix.push_back({pos(d(i)), pos(x(i)), neg(d(i + 1)), neg(e(i + 1))});
    q.matrix.push_back({pos(e(i)), neg(x(i)), neg(d(i + 1)), neg(e(i + 1))});
  }
  Clause last_d{pos(d(n)), pos(x(n))};
  Clause last_e{pos(e(n)), neg(x(n))};
  for (int i = 1; i <= n; ++i) {
    last_d.push_back(neg(f(i)));
    last_e.push_back(neg(f(i)));
  }
  q.matrix.push_back(std::move(last_d));
  q.matrix.push_back(std::move(last_e));
  for (int i = 1; i <= n; ++i) {
    q.matrix.push_back({pos(x(i)), pos(f(i))});
    q.matrix.push_back({neg(x(i)), pos(f(i))});
  }
  q.comments.push_back("KBKF n=" + std::to_string(n));
  return q;
}

BlockPattern parse_block_pattern(std::string_view text) {
  BlockPattern out;
  std::size_t i = 0;
  if (text.empty()) throw Error(ErrorKind::Input, "empty block pattern");
  while (i < text.size()) {
    const char c = text[i++];
    if (c != 'a' && c != 'e')
      throw Error(ErrorKind::Input, std::string("block pattern: unexpected '") + c + "'");
    int size = 0;
    bool digits = false;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
      size = size * 10 + (text[i++] - '0');
      digits = true;
      if (size > 100000) throw Error(ErrorKind::Input, "block pattern: block too large");
    }
    if (!digits) size = 1;
    if (size == 0) throw Error(ErrorKind::Input, "block pattern: empty block");
    const Quantifier q = c == 'a' ? Quantifier::Forall : Quantifier::Exists;
    if (!out.empty() && out.back().quantifier == q) out.back().size += size;
    else out.push_back({q, size});
  }
  return out;
}

namespace {

// std distributions are implementation-defined; this keeps output identical
// across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  std::uint64_t next() { return engine_(); }
  /// Uniform in [0, bound).
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
    std::uint64_t r;
    do r = engine_();
    while (r >= limit);
    return r % bound;
  }
  bool coin() { return below(2) == 1; }

 private:
  std::mt19937_64 engine_;
};

SignedPermutation draw_permutation(const Prefix& prefix, Var num_vars, Rng& rng) {
  std::vector<Literal> images;
  for (Var v = 1; v <= num_vars; ++v) images.push_back(Literal::positive(v));
  for (const auto& block : prefix.blocks()) {
    std::vector<Var> target = block.variables;
    for (std::size_t i = target.size(); i > 1; --i) std::swap(target[i - 1], target[rng.below(i)]);
    for (std::size_t i = 0; i < target.size(); ++i)
      images[block.variables[i] - 1] = Literal::of(target[i], rng.coin());
  }
  return SignedPermutation::from_images(std::move(images));
}

}  // namespace

SignedPermutation random_block_permutation(const Prefix& prefix, Var num_vars, std::uint64_t seed) {
  if (num_vars < prefix.max_var()) throw ValidationError("degree below the prefix variables");
  Rng rng(seed);
  return draw_permutation(prefix, num_vars, rng);
}

GeneratedQbf gen_random_qbf(const RandomQbfOptions& options) {
  if (options.vars < 1) throw ValidationError("need at least one variable");
  if (options.clauses < 0) throw ValidationError("clause count must be non-negative");
  if (options.max_clause_len < 1) throw ValidationError("clause length must be at least 1");
  Rng rng(options.seed);

  BlockPattern blocks = options.blocks;
  if (blocks.empty()) {
    Quantifier q = rng.coin() ? Quantifier::Forall : Quantifier::Exists;
    for (int left = options.vars; left > 0;) {
      const int size = std::min(left, int(1 + rng.below(3)));
      blocks.push_back({q, size});
      left -= size;
      q = flip(q);
    }
  }
  int total = 0;
  for (const auto& b : blocks) total += b.size;
  if (total != options.vars)
    throw ValidationError("block pattern covers " + std::to_string(total) + " variables, expected " +
                          std::to_string(options.vars));

  GeneratedQbf out;
  QbfInstance& q = out.instance;
  q.num_vars = options.vars;
  Var next = 1;
  for (const auto& b : blocks)
    for (int i = 0; i < b.size; ++i) q.prefix.append(b.quantifier, next++);

  std::vector<Var> all = q.prefix.order();
  bool has_exists = false;
  for (const auto& b : q.prefix.blocks()) has_exists |= b.quantifier == Quantifier::Exists;
  const int max_len = std::min(options.max_clause_len, options.vars);

  // a clause with only universal literals makes the instance trivially false
  auto draw_clause = [&]() {
    for (;;) {
      const int len = int(1 + rng.below(std::uint64_t(max_len)));
      std::vector<Var> pool = all;
      Clause c;
      bool existential = false;
      for (int k = 0; k < len; ++k) {
        const std::size_t pick = k + rng.below(pool.size() - k);
        std::swap(pool[k], pool[pick]);
        c.push_back(Literal::of(pool[k], rng.coin()));
        existential |= q.prefix.quantifier_of(pool[k]) == Quantifier::Exists;
      }
      if (existential || !has_exists) return c;
    }
  };

  if (!options.planted) {
    for (int i = 0; i < options.clauses; ++i) q.matrix.push_back(draw_clause());
  } else {
    SignedPermutation g;
    do g = draw_permutation(q.prefix, q.num_vars, rng);
    while (g.is_identity());
    while (q.matrix.size() < std::size_t(options.clauses)) {
      const Clause seed = draw_clause();
      const Clause start = sorted_literals(seed);
      Clause c = seed;
      do {
        q.matrix.push_back(c);
        c = g.apply(c);
      } while (sorted_literals(c) != start);
    }
    out.planted = std::move(g);
  }
  q.comments.push_back("random seed=" + std::to_string(options.seed) +
                       (options.planted ? " planted" : ""));
  return out;
}

}  // namespace qsym
