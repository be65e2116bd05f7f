#include "qsym/symmetry.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <deque>
#include <set>
#include <sstream>

#include "qsym/error.hpp"

namespace qsym {

// ---- SignedPermutation ----

SignedPermutation SignedPermutation::identity(Var degree) {
  SignedPermutation g;
  g.images_.reserve(degree);
  for (Var v = 1; v <= degree; ++v) g.images_.push_back(Literal(v));
  return g;
}

SignedPermutation SignedPermutation::from_images(std::vector<Literal> images) {
  const Var n = Var(images.size());
  std::vector<bool> hit(static_cast<std::size_t>(n) + 1, false);
  for (Var v = 1; v <= n; ++v) {
    const Var w = images[v - 1].var();
    if (w < 1 || w > n)
      throw ValidationError("image of variable " + std::to_string(v) + " is out of range");
    if (hit[w]) throw ValidationError("variable " + std::to_string(w) + " is hit twice");
    hit[w] = true;
  }
  SignedPermutation g;
  g.images_ = std::move(images);
  return g;
}

bool SignedPermutation::is_identity() const {
  for (Var v = 1; v <= degree(); ++v)
    if (images_[v - 1] != Literal(v)) return false;
  return true;
}

std::vector<Var> SignedPermutation::support() const {
  std::vector<Var> out;
  for (Var v = 1; v <= degree(); ++v)
    if (images_[v - 1] != Literal(v)) out.push_back(v);
  return out;
}

SignedPermutation SignedPermutation::inverse() const {
  SignedPermutation inv;
  inv.images_.resize(images_.size());
  for (Var v = 1; v <= degree(); ++v) {
    const Literal img = images_[v - 1];
    inv.images_[img.var() - 1] = Literal::of(v, img.is_negative());
  }
  return inv;
}

SignedPermutation SignedPermutation::extended(Var degree) const {
  SignedPermutation g = *this;
  for (Var v = this->degree() + 1; v <= degree; ++v) g.images_.push_back(Literal(v));
  return g;
}

SignedPermutation operator*(const SignedPermutation& g, const SignedPermutation& h) {
  const Var n = std::max(g.degree(), h.degree());
  SignedPermutation out;
  out.images_.reserve(n);
  for (Var v = 1; v <= n; ++v) out.images_.push_back(h(g.image(v)));
  return out;
}

Clause SignedPermutation::apply(const Clause& clause) const {
  Clause out;
  out.reserve(clause.size());
  for (Literal l : clause) out.push_back((*this)(l));
  return out;
}

Formula SignedPermutation::apply(const Formula& f) const {
  return rename(f, [this](Var v) { return Formula::literal(image(v)); });
}

Assignment SignedPermutation::apply(const Assignment& sigma) const {
  Assignment out;
  const Var n = std::max(sigma.max_var(), degree());
  for (Var v = 1; v <= n; ++v) {
    const Literal img = image(v);
    if (sigma.has(img.var())) out.set(v, sigma.value(img));
  }
  return out;
}

std::uint64_t SignedPermutation::apply_mask(std::uint64_t mask) const {
  if (degree() > 64) throw SizeError("packed assignments hold at most 64 variables");
  std::uint64_t out = mask;
  for (Var v = 1; v <= degree(); ++v) {
    const Literal img = images_[v - 1];
    const std::uint64_t bit = ((mask >> (img.var() - 1)) & 1u) ^ (img.is_negative() ? 1u : 0u);
    out = (out & ~(std::uint64_t{1} << (v - 1))) | (bit << (v - 1));
  }
  return out;
}

bool operator==(const SignedPermutation& a, const SignedPermutation& b) {
  return (a <=> b) == 0;
}

std::strong_ordering operator<=>(const SignedPermutation& a, const SignedPermutation& b) {
  const Var n = std::max(a.degree(), b.degree());
  for (Var v = 1; v <= n; ++v)
    if (auto c = a.image(v).dimacs() <=> b.image(v).dimacs(); c != 0) return c;
  return std::strong_ordering::equal;
}

// ---- cycle notation ----

std::string to_cycle_notation(const SignedPermutation& g) {
  std::string out;
  std::vector<bool> seen(static_cast<std::size_t>(g.degree()) + 1, false);
  for (Var start = 1; start <= g.degree(); ++start) {
    if (seen[start]) continue;
    std::vector<Var> cycle;
    for (Var v = start; !seen[v]; v = g.image(v).var()) {
      seen[v] = true;
      cycle.push_back(v);
    }
    if (cycle.size() == 1 && !g.image(start).is_negative()) continue;
    out += '(';
    for (std::size_t i = 0; i < cycle.size(); ++i) {
      const Var previous = cycle[(i + cycle.size() - 1) % cycle.size()];
      if (i > 0) out += ' ';
      if (g.image(previous).is_negative()) out += '-';
      out += std::to_string(cycle[i]);
    }
    out += ')';
  }
  return out.empty() ? "()" : out;
}

SignedPermutation parse_cycle_notation(std::string_view text, Var degree) {
  std::vector<Literal> images;
  images.reserve(degree);
  for (Var v = 1; v <= degree; ++v) images.push_back(Literal(v));
  std::vector<bool> used(static_cast<std::size_t>(degree) + 1, false);

  std::size_t i = 0;
  auto skip_space = [&] {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  };
  skip_space();
  while (i < text.size()) {
    if (text[i] != '(') throw ParseError(1, i + 1, "expected '('");
    ++i;
    std::vector<int> cycle;
    for (;;) {
      skip_space();
      if (i >= text.size()) throw ParseError(1, i + 1, "unterminated cycle");
      if (text[i] == ')') {
        ++i;
        break;
      }
      const std::size_t start = i;
      if (text[i] == '-' || text[i] == '+') ++i;
      while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
      int value = 0;
      auto [ptr, ec] = std::from_chars(text.data() + start + (text[start] == '+'), text.data() + i, value);
      if (ec != std::errc() || ptr != text.data() + i || value == 0)
        throw ParseError(1, start + 1, "expected a nonzero signed variable id");
      const Var v = value < 0 ? -value : value;
      if (v > degree)
        throw ValidationError("variable " + std::to_string(v) + " exceeds degree " +
                              std::to_string(degree));
      if (used[v]) throw ValidationError("variable " + std::to_string(v) + " repeats");
      used[v] = true;
      cycle.push_back(value);
    }
    for (std::size_t k = 0; k < cycle.size(); ++k) {
      const int from = cycle[k];
      const int to = cycle[(k + 1) % cycle.size()];
      images[(from < 0 ? -from : from) - 1] = Literal(to);
    }
    skip_space();
  }
  return SignedPermutation::from_images(std::move(images));
}

std::vector<SignedPermutation> parse_generators(std::string_view text, Var degree) {
  std::vector<SignedPermutation> out;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    std::size_t first = line.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) continue;
    if (line[first] == 'c' || line[first] == '#') continue;
    while (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    try {
      out.push_back(parse_cycle_notation(line, degree));
    } catch (const ParseError& e) {
      throw ParseError(line_no, e.column(), "malformed generator");
    }
  }
  return out;
}

std::string format_generators(std::span<const SignedPermutation> generators) {
  std::string out;
  for (const auto& g : generators) out += to_cycle_notation(g) + '\n';
  return out;
}

bool is_block_respecting(const SignedPermutation& g, const Prefix& prefix) {
  for (Var v = 1; v <= g.degree(); ++v) {
    const Literal img = g.image(v);
    if (img == Literal(v)) continue;
    const int block = prefix.block_of(v);
    if (block < 0 || prefix.block_of(img.var()) != block) return false;
  }
  return true;
}

GeneratorSet::GeneratorSet(Prefix prefix, std::vector<SignedPermutation> generators)
    : prefix_(std::move(prefix)), generators_(std::move(generators)) {
  for (std::size_t i = 0; i < generators_.size(); ++i)
    if (!is_block_respecting(generators_[i], prefix_))
      throw ValidationError("generator " + std::to_string(i + 1) + " " +
                            to_cycle_notation(generators_[i]) +
                            " moves a variable out of its quantifier block");
}

// ---- general admissible maps ----

AdmissibleMap::AdmissibleMap(std::vector<Formula> images) : images_(std::move(images)) {}

AdmissibleMap AdmissibleMap::from(const SignedPermutation& g) {
  std::vector<Formula> images;
  for (Var v = 1; v <= g.degree(); ++v) images.push_back(Formula::literal(g.image(v)));
  return AdmissibleMap(std::move(images));
}

Formula AdmissibleMap::image(Var v) const {
  return v >= 1 && v <= degree() ? images_[v - 1] : Formula::var(v);
}

Formula AdmissibleMap::apply(const Formula& f) const {
  return rename(f, [this](Var v) { return image(v); });
}

Assignment AdmissibleMap::apply(const Assignment& sigma) const {
  Assignment out;
  const Var n = std::max(sigma.max_var(), degree());
  for (Var v = 1; v <= n; ++v) {
    if (v > degree()) {
      if (sigma.has(v)) out.set(v, sigma.get(v));
      continue;
    }
    out.set(v, evaluate(images_[v - 1], sigma));
  }
  return out;
}

AdmissibilityReport check_admissible(const AdmissibleMap& map, const Prefix& prefix,
                                     std::size_t max_vars) {
  AdmissibilityReport report;
  const std::vector<Var> order = prefix.order();

  for (Var v = 1; v <= map.degree(); ++v) {
    const Formula img = map.image(v);
    const int block = prefix.block_of(v);
    if (block < 0) {
      if (!(img.kind() == Connective::Variable && img.variable() == v)) {
        report.block_respecting = false;
        report.violations.push_back("unquantified variable " + std::to_string(v) + " is moved");
      }
      continue;
    }
    for (Var w : variables(img)) {
      if (prefix.block_of(w) != block) {
        report.block_respecting = false;
        report.violations.push_back("image of variable " + std::to_string(v) +
                                    " mentions variable " + std::to_string(w) +
                                    " from another quantifier block");
      }
    }
  }
  if (!report.block_respecting) {
    // condition 1 is only checked over the prefix variables, which requires
    // images to stay inside them
    for (Var v : order)
      for (Var w : variables(map.image(v)))
        if (!prefix.contains(w)) return report;
  }

  if (order.size() > max_vars)
    throw SizeError("admissibility check over " + std::to_string(order.size()) +
                    " variables exceeds the cap of " + std::to_string(max_vars));
  const std::size_t n = order.size();
  std::vector<bool> hit(std::size_t{1} << n, false);
  Assignment sigma;
  for (std::uint64_t index = 0; index < (std::uint64_t{1} << n); ++index) {
    for (std::size_t k = 0; k < n; ++k) sigma.set(order[k], (index >> k) & 1u);
    std::uint64_t image_index = 0;
    for (std::size_t k = 0; k < n; ++k)
      if (evaluate(map.image(order[k]), sigma)) image_index |= std::uint64_t{1} << k;
    if (hit[image_index]) {
      report.bijective = false;
      report.violations.push_back("assignments " + std::to_string(index) +
                                  " and an earlier one have the same image");
      break;
    }
    hit[image_index] = true;
  }
  return report;
}

Assignment apply_to_assignment(const AdmissibleMap& map, const Assignment& sigma) {
  return map.apply(sigma);
}

Assignment apply_to_assignment(const SignedPermutation& g, const Assignment& sigma) {
  return g.apply(sigma);
}

// ---- symmetries of an instance ----

bool is_syntactic_symmetry(const SignedPermutation& g, const QbfInstance& instance,
                           SymmetryCheck mode) {
  if (!is_block_respecting(g, instance.prefix))
    throw ValidationError("permutation " + to_cycle_notation(g) +
                          " is not admissible for the prefix");
  if (mode == SymmetryCheck::ClauseMultiset) {
    std::vector<Clause> original;
    std::vector<Clause> mapped;
    original.reserve(instance.matrix.size());
    mapped.reserve(instance.matrix.size());
    for (const auto& clause : instance.matrix) {
      original.push_back(sorted_literals(clause));
      mapped.push_back(sorted_literals(g.apply(clause)));
    }
    std::sort(original.begin(), original.end());
    std::sort(mapped.begin(), mapped.end());
    return original == mapped;
  }
  const Formula matrix = instance.matrix_formula();
  const std::vector<Var> vars = instance.prefix.order();
  return equivalent(matrix, g.apply(matrix), vars, {.max_vars = 16, .parallel = true});
}

std::vector<SignedPermutation> group_closure(std::span<const SignedPermutation> generators,
                                             std::size_t cap) {
  Var degree = 0;
  for (const auto& g : generators) degree = std::max(degree, g.degree());
  std::vector<SignedPermutation> gens;
  for (const auto& g : generators) gens.push_back(g.extended(degree));

  std::vector<SignedPermutation> elements{SignedPermutation::identity(degree)};
  std::set<SignedPermutation> seen(elements.begin(), elements.end());
  for (std::size_t next = 0; next < elements.size(); ++next) {
    for (const auto& g : gens) {
      SignedPermutation product = elements[next] * g;
      if (seen.insert(product).second) {
        elements.push_back(std::move(product));
        if (elements.size() > cap)
          throw SizeError("group closure exceeds " + std::to_string(cap) + " elements");
      }
    }
  }
  return elements;
}

std::vector<Assignment> orbit_of_assignment(std::span<const SignedPermutation> generators,
                                            const Assignment& sigma, std::size_t cap) {
  std::vector<std::pair<std::uint64_t, Assignment>> images;
  std::set<std::uint64_t> seen;
  for (const auto& g : group_closure(generators, cap)) {
    Assignment image = g.apply(sigma);
    if (seen.insert(image.to_mask()).second) images.emplace_back(image.to_mask(), std::move(image));
  }
  std::sort(images.begin(), images.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<Assignment> out;
  for (auto& [mask, a] : images) out.push_back(std::move(a));
  return out;
}

}  // namespace qsym
