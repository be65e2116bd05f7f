#include "qsym/detect.hpp"

#include <algorithm>
#include <numeric>
#include <optional>

#include "qsym/error.hpp"

namespace qsym {

// ---- graph ----

int ColoredGraph::add_vertex(int color, VertexOrigin origin) {
  colors_.push_back(color);
  origins_.push_back(origin);
  adjacency_.emplace_back();
  return int(colors_.size() - 1);
}

bool ColoredGraph::add_edge(int a, int b) {
  if (a == b || has_edge(a, b)) return false;
  auto insert = [](std::vector<int>& list, int v) {
    list.insert(std::lower_bound(list.begin(), list.end(), v), v);
  };
  insert(adjacency_[a], b);
  insert(adjacency_[b], a);
  ++edge_count_;
  return true;
}

bool ColoredGraph::has_edge(int a, int b) const {
  const auto& list = adjacency_[a];
  return std::binary_search(list.begin(), list.end(), b);
}

bool ColoredGraph::is_automorphism(std::span<const int> perm) const {
  const std::size_t n = vertex_count();
  if (perm.size() != n) return false;
  std::vector<bool> hit(n, false);
  for (std::size_t v = 0; v < n; ++v) {
    const int w = perm[v];
    if (w < 0 || std::size_t(w) >= n || hit[w]) return false;
    hit[w] = true;
    if (colors_[v] != colors_[w]) return false;
    if (adjacency_[v].size() != adjacency_[w].size()) return false;
  }
  for (std::size_t v = 0; v < n; ++v)
    for (int u : adjacency_[v])
      if (!has_edge(perm[v], perm[u])) return false;
  return true;
}

int literal_vertex(const QbfInstance& instance, Literal lit) {
  const auto order = instance.prefix.order();
  const auto it = std::find(order.begin(), order.end(), lit.var());
  if (it == order.end()) return -1;
  return 2 * int(it - order.begin()) + (lit.is_negative() ? 1 : 0);
}

ColoredGraph build_symmetry_graph(const QbfInstance& instance, const GraphOptions& options) {
  ColoredGraph graph;
  const auto order = instance.prefix.order();
  std::vector<int> position(static_cast<std::size_t>(instance.prefix.max_var()) + 1, -1);
  for (std::size_t i = 0; i < order.size(); ++i) {
    const Var v = order[i];
    position[v] = int(i);
    const int color = instance.prefix.block_of(v);
    graph.add_vertex(color, {VertexOrigin::Kind::Literal, Literal::positive(v), 0});
    graph.add_vertex(color, {VertexOrigin::Kind::Literal, Literal::negative(v), 0});
    graph.add_edge(2 * int(i), 2 * int(i) + 1);
  }
  auto vertex_of = [&](Literal l) {
    if (std::size_t(l.var()) >= position.size() || position[l.var()] < 0)
      throw ValidationError("clause variable " + std::to_string(l.var()) + " is not quantified");
    return 2 * position[l.var()] + (l.is_negative() ? 1 : 0);
  };

  const int clause_color = int(instance.prefix.block_count());
  for (std::size_t c = 0; c < instance.matrix.size(); ++c) {
    const Clause& clause = instance.matrix[c];
    if (options.collapse_binary && clause.size() == 2) {
      graph.add_edge(vertex_of(clause[0]), vertex_of(clause[1]));
      continue;
    }
    const int cv = graph.add_vertex(clause_color, {VertexOrigin::Kind::Clause, Literal(1), c});
    for (Literal l : clause) graph.add_edge(cv, vertex_of(l));
  }
  return graph;
}

// ---- refinement ----

namespace {

std::size_t distinct(const std::vector<int>& colors) {
  std::vector<int> sorted = colors;
  std::sort(sorted.begin(), sorted.end());
  return std::size_t(std::unique(sorted.begin(), sorted.end()) - sorted.begin());
}

// Dense ranks of per-vertex keys, in key order.
template <class Key>
std::vector<int> rank_by(const std::vector<Key>& keys) {
  std::vector<int> idx(keys.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](int a, int b) { return keys[a] < keys[b]; });
  std::vector<int> out(keys.size());
  int rank = -1;
  for (std::size_t i = 0; i < idx.size(); ++i) {
    if (i == 0 || keys[idx[i - 1]] < keys[idx[i]]) ++rank;
    out[idx[i]] = rank;
  }
  return out;
}

}  // namespace

std::vector<int> refine_coloring(const ColoredGraph& graph, std::vector<int> colors) {
  const std::size_t n = graph.vertex_count();
  if (colors.size() != n) throw ValidationError("coloring size does not match the graph");
  colors = rank_by(colors);
  std::size_t cells = distinct(colors);
  std::vector<std::pair<int, std::vector<int>>> keys(n);
  for (;;) {
    for (std::size_t v = 0; v < n; ++v) {
      keys[v].first = colors[v];
      auto& around = keys[v].second;
      around.clear();
      for (int u : graph.neighbors(int(v))) around.push_back(colors[u]);
      std::sort(around.begin(), around.end());
    }
    std::vector<int> next = rank_by(keys);
    const std::size_t next_cells = distinct(next);
    colors = std::move(next);
    if (next_cells == cells) return colors;
    cells = next_cells;
  }
}

// ---- automorphism search ----

namespace {

std::vector<int> individualize(const std::vector<int>& colors, int v) {
  std::vector<int> out(colors.size());
  for (std::size_t u = 0; u < colors.size(); ++u) out[u] = 2 * colors[u] + (int(u) != v ? 1 : 0);
  return out;
}

std::vector<int> cell_sizes(const std::vector<int>& colors) {
  std::vector<int> sizes(colors.size(), 0);
  for (int c : colors) ++sizes[c];
  return sizes;
}

// First cell with at least two vertices, in vertex order; empty when discrete.
std::vector<int> target_cell(const std::vector<int>& colors) {
  const auto sizes = cell_sizes(colors);
  int target = -1;
  for (std::size_t c = 0; c < sizes.size(); ++c)
    if (sizes[c] >= 2) {
      target = int(c);
      break;
    }
  std::vector<int> cell;
  if (target < 0) return cell;
  for (std::size_t v = 0; v < colors.size(); ++v)
    if (colors[v] == target) cell.push_back(int(v));
  return cell;
}

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  }
  void unite(int a, int b) { parent[find(a)] = find(b); }
  bool same(int a, int b) { return find(a) == find(b); }
};

class Searcher {
 public:
  Searcher(const ColoredGraph& graph, std::uint64_t budget, AutomorphismSearch& out)
      : graph_(graph), budget_(budget), out_(out) {}

  void run() {
    auto root = refine(graph_.colors());
    if (!root) return;
    path_.push_back(*root);
    invariants_.push_back(cell_sizes(*root));
    for (;;) {
      const auto cell = target_cell(path_.back());
      if (cell.empty()) break;
      choices_.push_back(cell.front());
      auto next = refine(individualize(path_.back(), cell.front()));
      if (!next) return;
      path_.push_back(*next);
      invariants_.push_back(cell_sizes(*next));
    }
    first_leaf_ = path_.back();

    UnionFind orbits(graph_.vertex_count());
    for (std::size_t level = choices_.size(); level-- > 0;) {
      const int chosen = choices_[level];
      std::vector<int> failed;
      for (int w : target_cell(path_[level])) {
        if (w == chosen || orbits.same(w, chosen)) continue;
        if (std::any_of(failed.begin(), failed.end(), [&](int f) { return orbits.same(w, f); }))
          continue;
        auto perm = descend(individualize(path_[level], w), level + 1);
        if (exhausted_) return;
        if (!perm) {
          failed.push_back(w);
          continue;
        }
        for (std::size_t v = 0; v < perm->size(); ++v) orbits.unite(int(v), (*perm)[v]);
        out_.generators.push_back(std::move(*perm));
      }
    }
  }

 private:
  std::optional<std::vector<int>> refine(const std::vector<int>& colors) {
    if (out_.nodes >= budget_) {
      exhausted_ = true;
      out_.complete = false;
      return std::nullopt;
    }
    ++out_.nodes;
    return refine_coloring(graph_, colors);
  }

  // Depth-first search below one node for a leaf equivalent to the first leaf.
  std::optional<std::vector<int>> descend(const std::vector<int>& unrefined, std::size_t depth) {
    auto colors = refine(unrefined);
    if (!colors) return std::nullopt;
    if (depth >= invariants_.size() || cell_sizes(*colors) != invariants_[depth])
      return std::nullopt;
    const auto cell = target_cell(*colors);
    if (cell.empty()) {
      std::vector<int> vertex_at(colors->size());
      for (std::size_t v = 0; v < colors->size(); ++v) vertex_at[(*colors)[v]] = int(v);
      std::vector<int> perm(colors->size());
      for (std::size_t v = 0; v < perm.size(); ++v) perm[v] = vertex_at[first_leaf_[v]];
      if (graph_.is_automorphism(perm)) return perm;
      return std::nullopt;
    }
    for (int u : cell) {
      auto found = descend(individualize(*colors, u), depth + 1);
      if (found || exhausted_) return found;
    }
    return std::nullopt;
  }

  const ColoredGraph& graph_;
  std::uint64_t budget_;
  AutomorphismSearch& out_;
  bool exhausted_ = false;
  std::vector<std::vector<int>> path_;
  std::vector<std::vector<int>> invariants_;
  std::vector<int> choices_;
  std::vector<int> first_leaf_;
};

}  // namespace

AutomorphismSearch find_automorphisms(const ColoredGraph& graph, std::uint64_t budget) {
  AutomorphismSearch out;
  if (graph.vertex_count() == 0) return out;
  Searcher(graph, budget, out).run();
  return out;
}

// ---- projection to signed permutations ----

SignedGenerators to_signed_permutations(std::span<const std::vector<int>> perms,
                                        const QbfInstance& instance) {
  SignedGenerators out;
  const auto order = instance.prefix.order();
  const int literal_vertices = 2 * int(order.size());
  const Var degree = std::max(instance.num_vars, instance.prefix.max_var());

  for (std::size_t k = 0; k < perms.size(); ++k) {
    const auto& perm = perms[k];
    const std::string name = "automorphism " + std::to_string(k + 1);
    if (perm.size() < std::size_t(literal_vertices)) {
      out.warnings.push_back(name + " does not cover the literal vertices; dropped");
      continue;
    }
    std::vector<Literal> images;
    images.reserve(degree);
    for (Var v = 1; v <= degree; ++v) images.push_back(Literal::positive(v));
    bool paired = true;
    for (std::size_t i = 0; i < order.size() && paired; ++i) {
      const int p = perm[2 * i];
      const int q = perm[2 * i + 1];
      if (p < 0 || q < 0 || p >= literal_vertices || q >= literal_vertices || (p ^ 1) != q) {
        paired = false;
        break;
      }
      images[order[i] - 1] = Literal::of(order[p / 2], p % 2 == 1);
    }
    if (!paired) {
      out.warnings.push_back(name + " breaks literal pairing; dropped");
      continue;
    }
    SignedPermutation g = SignedPermutation::from_images(std::move(images));
    if (g.is_identity()) {
      out.warnings.push_back(name + " only moves clause vertices; dropped");
      continue;
    }
    if (std::find(out.generators.begin(), out.generators.end(), g) != out.generators.end()) {
      out.warnings.push_back(name + " repeats an earlier generator; dropped");
      continue;
    }
    if (!is_block_respecting(g, instance.prefix) ||
        !is_syntactic_symmetry(g, instance, SymmetryCheck::ClauseMultiset)) {
      out.warnings.push_back(name + " is not a symmetry of the matrix; dropped");
      continue;
    }
    out.generators.push_back(std::move(g));
  }
  return out;
}

Detection detect_symmetries(const QbfInstance& instance, const DetectOptions& options) {
  const ColoredGraph graph = build_symmetry_graph(instance, options.graph);
  AutomorphismSearch search = find_automorphisms(graph, options.budget);
  SignedGenerators signed_gens = to_signed_permutations(search.generators, instance);
  Detection out;
  out.generators = std::move(signed_gens.generators);
  out.warnings = std::move(signed_gens.warnings);
  out.complete = search.complete;
  out.nodes = search.nodes;
  if (!out.complete)
    out.warnings.push_back("search budget exhausted after " + std::to_string(out.nodes) +
                           " nodes; generators may be incomplete");
  return out;
}

}  // namespace qsym
