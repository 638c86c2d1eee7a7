#include "bdtree/tree.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "bdtree/error.hpp"

namespace bdtree {

namespace {

constexpr Vertex kNoParent = static_cast<Vertex>(-1);

bool positive_finite(double x) { return std::isfinite(x) && x > 0.0; }

}  // namespace

std::span<const Vertex> RootedTree::children(Vertex i) const {
  const auto begin = child_begin_.at(i);
  const auto end = child_begin_.at(i + 1);
  return std::span<const Vertex>(children_).subspan(begin, end - begin);
}

std::vector<RawEdge> RootedTree::edges() const {
  std::vector<RawEdge> out;
  out.reserve(size() - 1);
  for (Vertex i = 1; i < size(); ++i) {
    out.push_back({i, parent_[i], rate_up_[i], rate_down_[i]});
  }
  return out;
}

RootedTree validate_tree(std::span<const RawEdge> edges) {
  const std::size_t n = edges.size() + 1;
  RootedTree t;
  t.parent_.assign(n, kNoParent);
  t.rate_up_.assign(n, 0.0);
  t.rate_down_.assign(n, 0.0);

  for (const auto& e : edges) {
    if (e.vertex == kRoot) {
      throw Error(Errc::CycleOrDisconnected, "the root 0 cannot have a parent");
    }
    if (e.vertex >= n) {
      throw Error(Errc::CycleOrDisconnected,
                  "vertex " + std::to_string(e.vertex) + " outside 0.." + std::to_string(n - 1));
    }
    if (t.parent_[e.vertex] != kNoParent) {
      throw Error(Errc::DuplicateVertex, "vertex " + std::to_string(e.vertex) + " listed twice");
    }
    if (!positive_finite(e.rate_up) || !positive_finite(e.rate_down)) {
      throw Error(Errc::NonPositiveRate,
                  "edge of vertex " + std::to_string(e.vertex) + " needs positive finite rates");
    }
    if (e.parent >= n || e.parent == e.vertex) {
      throw Error(Errc::CycleOrDisconnected,
                  "parent " + std::to_string(e.parent) + " of vertex " + std::to_string(e.vertex) +
                      " is undefined");
    }
    t.parent_[e.vertex] = e.parent;
    t.rate_up_[e.vertex] = e.rate_up;
    t.rate_down_[e.vertex] = e.rate_down;
  }

  // Counting sort into CSR child lists, ascending by child id.
  t.child_begin_.assign(n + 1, 0);
  for (Vertex i = 1; i < n; ++i) ++t.child_begin_[t.parent_[i] + 1];
  for (std::size_t i = 0; i < n; ++i) t.child_begin_[i + 1] += t.child_begin_[i];
  t.children_.assign(n - 1, 0);
  {
    auto cursor = t.child_begin_;
    for (Vertex i = 1; i < n; ++i) t.children_[cursor[t.parent_[i]]++] = i;
  }

  t.layer_.assign(n, -1);
  t.layer_[kRoot] = 0;
  t.order_.reserve(n);
  t.order_.push_back(kRoot);
  for (std::size_t head = 0; head < t.order_.size(); ++head) {
    const Vertex v = t.order_[head];
    for (Vertex c : t.children(v)) {
      t.layer_[c] = t.layer_[v] + 1;
      t.order_.push_back(c);
    }
  }
  if (t.order_.size() != n) {
    throw Error(Errc::CycleOrDisconnected, "parent links do not connect every vertex to the root");
  }
  t.parent_[kRoot] = kRoot;
  if (t.children(kRoot).size() != 1) {
    throw Error(Errc::RootDegree, "the root must have exactly one child, found " +
                                      std::to_string(t.children(kRoot).size()));
  }
  t.max_layer_ = *std::max_element(t.layer_.begin(), t.layer_.end());
  return t;
}

Measure compute_measure(const RootedTree& tree) {
  const std::size_t n = tree.size();
  Measure m;
  m.mu.assign(n, 0.0);
  m.mu[kRoot] = 1.0;
  const auto order = tree.preorder();
  for (std::size_t k = 1; k < order.size(); ++k) {
    const Vertex i = order[k];
    m.mu[i] = m.mu[tree.parent(i)] * (tree.rate_down(i) / tree.rate_up(i));
  }
  m.subtree_mass = m.mu;
  for (std::size_t k = order.size(); k-- > 1;) {
    const Vertex i = order[k];
    m.subtree_mass[tree.parent(i)] += m.subtree_mass[i];
  }
  return m;
}

std::vector<Vertex> path_to_root(const RootedTree& tree, Vertex i) {
  if (i == kRoot) throw Error(Errc::RootHasNoPath, "the root has no path to itself");
  if (i >= tree.size()) throw Error(Errc::RootHasNoPath, "vertex out of range");
  std::vector<Vertex> path;
  path.reserve(static_cast<std::size_t>(tree.layer(i)));
  for (Vertex v = i; v != kRoot; v = tree.parent(v)) path.push_back(v);
  return path;
}

bool in_subtree(const RootedTree& tree, Vertex k, Vertex j) {
  for (Vertex v = k;; v = tree.parent(v)) {
    if (v == j) return true;
    if (v == kRoot) return false;
  }
}

Collapse collapse(const RootedTree& tree, const Measure& measure, int m) {
  if (m < 1 || m > tree.max_layer()) {
    throw Error(Errc::LayerOutOfRange, "collapse layer " + std::to_string(m) + " outside 1.." +
                                           std::to_string(tree.max_layer()));
  }
  Collapse out;
  out.layer = m;
  out.source_size = tree.size();
  std::vector<Vertex> to_collapsed(tree.size(), kNoParent);
  for (Vertex i = 0; i < tree.size(); ++i) {
    if (tree.layer(i) <= m) {
      to_collapsed[i] = out.to_full.size();
      out.to_full.push_back(i);
    }
  }
  std::vector<RawEdge> edges;
  edges.reserve(out.to_full.size() - 1);
  for (std::size_t c = 1; c < out.to_full.size(); ++c) {
    const Vertex i = out.to_full[c];
    double up = tree.rate_up(i);
    if (tree.layer(i) == m && !tree.children(i).empty()) {
      up = measure.mu[i] * up / measure.subtree_mass[i];
    }
    edges.push_back({c, to_collapsed[tree.parent(i)], up, tree.rate_down(i)});
  }
  out.tree = validate_tree(edges);
  return out;
}

namespace {

// Raw engine output mapped by hand so results do not depend on the standard
// library's distribution implementations.
double unit_interval(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::uint64_t uniform_index(std::mt19937_64& rng, std::uint64_t lo, std::uint64_t hi) {
  return lo + rng() % (hi - lo + 1);
}

}  // namespace

RootedTree random_tree(std::uint64_t seed, const RandomTreeOptions& options) {
  const auto& o = options;
  if (o.min_vertices < 2 || o.max_vertices < o.min_vertices) {
    throw Error(Errc::DegenerateParams, "vertex range must satisfy 2 <= min <= max");
  }
  if (!positive_finite(o.rate_min) || !positive_finite(o.rate_max) || o.rate_max < o.rate_min) {
    throw Error(Errc::DegenerateParams, "rate range must lie in (0, inf) with min <= max");
  }
  if (!(o.path_bias >= 0.0 && o.path_bias <= 1.0)) {
    throw Error(Errc::DegenerateParams, "path_bias must lie in [0, 1]");
  }
  std::mt19937_64 rng(seed);
  const auto n = static_cast<std::size_t>(uniform_index(rng, o.min_vertices, o.max_vertices));
  auto rate = [&] { return o.rate_min + (o.rate_max - o.rate_min) * unit_interval(rng); };

  std::vector<RawEdge> edges;
  edges.reserve(n - 1);
  for (Vertex v = 1; v < n; ++v) {
    Vertex parent = 0;
    if (v >= 2) {
      parent = unit_interval(rng) < o.path_bias ? v - 1 : uniform_index(rng, 1, v - 1);
    }
    const double up = rate();
    const double down = rate();
    edges.push_back({v, parent, up, down});
  }
  return validate_tree(edges);
}

}  // namespace bdtree
