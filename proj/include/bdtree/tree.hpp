#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace bdtree {

// Vertices are dense labels 0..n-1; 0 is the absorbing root.
using Vertex = std::size_t;
inline constexpr Vertex kRoot = 0;

// One non-root vertex as it appears in an edge list: the vertex, its parent
// and the two rates of the connecting edge.
struct RawEdge {
  Vertex vertex = 0;
  Vertex parent = 0;
  double rate_up = 0.0;    // q_{i,parent(i)}
  double rate_down = 0.0;  // q_{parent(i),i}

  bool operator==(const RawEdge&) const = default;
};

// Immutable rooted tree carrying birth-death rates on its edges.
//
// Invariants (enforced by validate_tree):
//   * the root 0 has exactly one child;
//   * the parent links form a single tree over {0..n-1};
//   * layer(i) == layer(parent(i)) + 1, layer(0) == 0;
//   * both rates of every edge are finite and strictly positive.
//
// Both rates of an edge are stored on its child endpoint.
class RootedTree {
 public:
  std::size_t size() const noexcept { return parent_.size(); }
  Vertex parent(Vertex i) const { return parent_.at(i); }
  std::span<const Vertex> children(Vertex i) const;
  int layer(Vertex i) const { return layer_.at(i); }
  int max_layer() const noexcept { return max_layer_; }
  double rate_up(Vertex i) const { return rate_up_.at(i); }
  double rate_down(Vertex i) const { return rate_down_.at(i); }
  Vertex root_son() const noexcept { return children_[0]; }

  // Breadth-first order starting at the root; parents precede children.
  std::span<const Vertex> preorder() const noexcept { return order_; }

  // Edge list sorted by vertex id, the inverse of validate_tree.
  std::vector<RawEdge> edges() const;

  bool operator==(const RootedTree&) const = default;

 private:
  friend RootedTree validate_tree(std::span<const RawEdge> edges);

  std::vector<Vertex> parent_;
  std::vector<double> rate_up_;
  std::vector<double> rate_down_;
  std::vector<int> layer_;
  // CSR child lists: children of i are children_[child_begin_[i] .. child_begin_[i+1]).
  std::vector<std::size_t> child_begin_;
  std::vector<Vertex> children_;
  std::vector<Vertex> order_;
  int max_layer_ = 0;
};

// Builds a tree from one entry per non-root vertex. The vertex count is
// edges.size() + 1. Throws Error with CycleOrDisconnected, NonPositiveRate,
// RootDegree or DuplicateVertex.
RootedTree validate_tree(std::span<const RawEdge> edges);

// The symmetric (reversible) measure normalised by mu(0) == 1, together with
// the subtree masses mu(T_j).
struct Measure {
  std::vector<double> mu;
  std::vector<double> subtree_mass;

  double total() const noexcept { return subtree_mass.empty() ? 0.0 : subtree_mass[0]; }
};

Measure compute_measure(const RootedTree& tree);

// [i, parent(i), ..., root_son]; the root itself is never included.
std::vector<Vertex> path_to_root(const RootedTree& tree, Vertex i);

// True iff k lies in the subtree rooted at j (j itself included).
bool in_subtree(const RootedTree& tree, Vertex k, Vertex j);

// Result of collapsing every subtree hanging at layer m into its top vertex.
struct Collapse {
  RootedTree tree;
  // to_full[c] is the label in the source tree of collapsed vertex c.
  std::vector<Vertex> to_full;
  int layer = 0;
  std::size_t source_size = 0;
};

// Truncates to layers <= m. At layer m the up-rate becomes
// mu_i q_{i,i*} / mu(T_i) so that the collapsed measure there equals mu(T_i).
// Leaves at layer m keep their rate untouched, so m == max_layer reproduces
// the input exactly. Throws LayerOutOfRange unless 1 <= m <= max_layer.
Collapse collapse(const RootedTree& tree, const Measure& measure, int m);

struct RandomTreeOptions {
  std::size_t min_vertices = 2;
  std::size_t max_vertices = 50;
  double rate_min = 0.1;
  double rate_max = 10.0;
  // Probability that a new vertex attaches to the previously created vertex
  // rather than to a uniformly chosen non-root vertex. 1.0 yields a path.
  double path_bias = 0.3;
};

// Deterministic in (seed, options). Throws DegenerateParams.
RootedTree random_tree(std::uint64_t seed, const RandomTreeOptions& options = {});

}  // namespace bdtree
