#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "qsym/instance.hpp"
#include "qsym/symmetry.hpp"

namespace qsym {

/// What a vertex of the symmetry graph stands for.
struct VertexOrigin {
  enum class Kind : std::uint8_t { Literal, Clause };
  Kind kind = Kind::Literal;
  Literal literal;          // Kind::Literal
  std::size_t clause = 0;   // Kind::Clause: index into the matrix
};

/// Simple undirected vertex-colored graph.
class ColoredGraph {
 public:
  int add_vertex(int color, VertexOrigin origin);
  /// Ignores self loops and repeated edges. Returns whether an edge was added.
  bool add_edge(int a, int b);

  std::size_t vertex_count() const { return colors_.size(); }
  std::size_t edge_count() const { return edge_count_; }
  int color(int v) const { return colors_[v]; }
  const std::vector<int>& colors() const { return colors_; }
  const VertexOrigin& origin(int v) const { return origins_[v]; }
  std::span<const int> neighbors(int v) const { return adjacency_[v]; }
  bool has_edge(int a, int b) const;

  /// Whether `perm` (vertex -> vertex) preserves colors and edges.
  bool is_automorphism(std::span<const int> perm) const;

 private:
  std::vector<int> colors_;
  std::vector<VertexOrigin> origins_;
  std::vector<std::vector<int>> adjacency_;  // kept sorted
  std::size_t edge_count_ = 0;
};

struct GraphOptions {
  /// Binary clauses become a literal–literal edge instead of a clause vertex.
  bool collapse_binary = false;
};

/// Two literal vertices per quantified variable joined by an edge, one
/// vertex per clause joined to its literals. Literal vertices are colored by
/// quantifier block index, clause vertices share the color block_count.
ColoredGraph build_symmetry_graph(const QbfInstance& instance,
                                  const GraphOptions& options = {});

/// Literal vertex of `lit`, or -1 when the variable is not quantified.
/// Literal vertices are numbered 2i (positive) and 2i+1 (negative) by
/// prefix position i.
int literal_vertex(const QbfInstance& instance, Literal lit);

/// Coarsest equitable refinement of `colors`. Output colors are 0..k-1,
/// ordered consistently with the input colors and otherwise independent of
/// vertex numbering.
std::vector<int> refine_coloring(const ColoredGraph& graph, std::vector<int> colors);

struct AutomorphismSearch {
  std::vector<std::vector<int>> generators;  // vertex permutations, no identity
  bool complete = true;                      // false when the budget ran out
  std::uint64_t nodes = 0;                   // refinement nodes expanded
};

/// Individualization–refinement search along the first path: for every
/// level, each target-cell vertex not already in the orbit of the first-path
/// choice (under generators found so far) is tried by a depth-first search
/// for a leaf equivalent to the first leaf. Together the harvested
/// automorphisms generate the automorphism group. `budget` bounds the number
/// of nodes; on exhaustion the result is flagged incomplete.
AutomorphismSearch find_automorphisms(const ColoredGraph& graph,
                                      std::uint64_t budget = 1'000'000);

struct SignedGenerators {
  std::vector<SignedPermutation> generators;
  std::vector<std::string> warnings;
};

/// Projects vertex permutations to signed permutations of the instance
/// variables. Permutations that break literal pairing, duplicates, identity
/// projections, and anything failing is_syntactic_symmetry are dropped with
/// a warning.
SignedGenerators to_signed_permutations(std::span<const std::vector<int>> perms,
                                        const QbfInstance& instance);

struct DetectOptions {
  GraphOptions graph;
  std::uint64_t budget = 1'000'000;
};

struct Detection {
  std::vector<SignedPermutation> generators;
  std::vector<std::string> warnings;
  bool complete = true;
  std::uint64_t nodes = 0;
};

/// build_symmetry_graph + find_automorphisms + to_signed_permutations.
Detection detect_symmetries(const QbfInstance& instance, const DetectOptions& options = {});

}  // namespace qsym
