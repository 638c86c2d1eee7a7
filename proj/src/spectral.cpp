#include "bdtree/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>

#include "bdtree/operators.hpp"

namespace bdtree {

namespace {

constexpr int kBisectionCap = 10000;
constexpr double kResidualFactor = 1e-10;

}  // namespace

double DirichletMatrix::entry(Vertex i, Vertex j) const {
  if (i == kRoot || j == kRoot) return 0.0;
  if (i == j) return diagonal.at(i);
  if (parent.at(i) == j) return off_diagonal.at(i);
  if (parent.at(j) == i) return off_diagonal.at(j);
  return 0.0;
}

std::vector<double> DirichletMatrix::to_dense() const {
  const std::size_t d = dimension;
  std::vector<double> a(d * d, 0.0);
  for (Vertex i = 1; i <= d; ++i) {
    a[(i - 1) * d + (i - 1)] = diagonal[i];
    const Vertex p = parent[i];
    if (p != kRoot) {
      a[(i - 1) * d + (p - 1)] = off_diagonal[i];
      a[(p - 1) * d + (i - 1)] = off_diagonal[i];
    }
  }
  return a;
}

double DirichletMatrix::quadratic_form(std::span<const double> v) const {
  double sum = 0.0;
  for (Vertex i = 1; i <= dimension; ++i) {
    sum += diagonal[i] * v[i] * v[i];
    if (parent[i] != kRoot) sum += 2.0 * off_diagonal[i] * v[i] * v[parent[i]];
  }
  return sum;
}

DirichletMatrix build_dirichlet_matrix(const RootedTree& tree, const Measure& measure) {
  const std::size_t n = tree.size();
  DirichletMatrix m;
  m.dimension = n - 1;
  m.parent.assign(n, kRoot);
  m.diagonal.assign(n, 0.0);
  m.off_diagonal.assign(n, 0.0);
  m.rate_up.assign(n, 0.0);
  m.rate_down.assign(n, 0.0);
  m.sqrt_mu.assign(n, 1.0);
  for (Vertex i = 1; i < n; ++i) {
    const Vertex p = tree.parent(i);
    m.parent[i] = p;
    m.rate_up[i] = tree.rate_up(i);
    m.rate_down[i] = tree.rate_down(i);
    m.sqrt_mu[i] = std::sqrt(measure.mu[i]);
    m.diagonal[i] += tree.rate_up(i);
    if (p != kRoot) {
      m.diagonal[p] += tree.rate_down(i);
      m.off_diagonal[i] = -std::sqrt(tree.rate_up(i) * tree.rate_down(i));
    }
  }
  const auto order = tree.preorder();
  m.order.assign(order.begin() + 1, order.end());
  return m;
}

namespace {

// Leaves-first elimination of M - sigma. pivot_v = rate_up_v + excess_v where
//   excess_v = -sigma + sum_{c child} rate_down_c * excess_c / pivot_c.
// Returns false as soon as a pivot is not positive, i.e. sigma >= lambda0.
bool eliminate(const DirichletMatrix& m, double sigma, std::vector<double>& pivot) {
  std::vector<double> excess(m.parent.size(), -sigma);
  pivot.assign(m.parent.size(), 0.0);
  for (auto it = m.order.rbegin(); it != m.order.rend(); ++it) {
    const Vertex v = *it;
    const double p = m.rate_up[v] + excess[v];
    if (!(p > 0.0)) return false;
    pivot[v] = p;
    const Vertex parent = m.parent[v];
    if (parent != kRoot) excess[parent] += m.rate_down[v] * excess[v] / p;
  }
  return true;
}

double residual_of(const DirichletMatrix& m, const VertexFunction& g, double lambda) {
  std::vector<double> omega(m.parent.size(), 0.0);
  for (Vertex c : m.order) {
    const Vertex p = m.parent[c];
    omega[c] += m.rate_up[c] * (g[p] - g[c]);
    if (p != kRoot) omega[p] += m.rate_down[c] * (g[c] - g[p]);
  }
  double worst = 0.0;
  double scale = 0.0;
  for (Vertex c : m.order) {
    worst = std::max(worst, std::abs(omega[c] + lambda * g[c]));
    scale = std::max(scale, std::abs(g[c]));
  }
  return worst / scale;
}

}  // namespace

EigenPair smallest_eigenpair(const DirichletMatrix& m) {
  if (m.dimension == 0) throw Error(Errc::DimensionTooLarge, "empty Dirichlet problem");
  // lambda0 <= e_i^T M e_i for every coordinate vector; M is positive definite.
  double lo = 0.0;
  double hi = std::numeric_limits<double>::infinity();
  for (Vertex v : m.order) hi = std::min(hi, m.diagonal[v]);
  double max_diag = 0.0;
  for (Vertex v : m.order) max_diag = std::max(max_diag, m.diagonal[v]);

  std::vector<double> pivot;
  int iterations = 0;
  for (; iterations < kBisectionCap; ++iterations) {
    const double mid = lo + 0.5 * (hi - lo);
    if (mid <= lo || mid >= hi) break;
    if (eliminate(m, mid, pivot)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const double lambda = lo + 0.5 * (hi - lo);

  // At sigma = lo every pivot is positive; the root son's pivot is the one
  // that vanishes at lambda0, and the remaining rows give the ratios.
  eliminate(m, lo, pivot);
  const std::size_t n = m.parent.size();
  EigenPair pair;
  pair.lambda0 = lambda;
  pair.g = VertexFunction(n, 0.0);
  for (Vertex v : m.order) {
    const Vertex p = m.parent[v];
    pair.g[v] = p == kRoot ? 1.0 : pair.g[p] * (m.rate_up[v] / pivot[v]);
  }
  pair.residual = residual_of(m, pair.g, lambda);

  if (iterations >= kBisectionCap || !(pair.residual <= kResidualFactor * max_diag)) {
    char what[128];
    std::snprintf(what, sizeof what, "bisection stopped after %d steps with residual %.6g (bound %.6g)",
                  iterations, pair.residual, kResidualFactor * max_diag);
    throw ConvergenceFailure(what, lambda, pair.residual);
  }
  return pair;
}

EigenPair solve_dirichlet(const RootedTree& tree, const Measure& measure) {
  return smallest_eigenpair(build_dirichlet_matrix(tree, measure));
}

std::vector<ApproxEntry> lambda0_sequence(const RootedTree& tree, const Measure& measure,
                                          std::span<const int> layers) {
  std::vector<ApproxEntry> out;
  out.reserve(layers.size());
  int previous = 0;
  for (int m : layers) {
    if (m < 1 || m > tree.max_layer()) {
      throw Error(Errc::LayerOutOfRange, "layer " + std::to_string(m) + " outside 1.." +
                                             std::to_string(tree.max_layer()));
    }
    if (m <= previous) throw Error(Errc::LayerOutOfRange, "layers must be strictly ascending");
    previous = m;
    auto collapsed = collapse(tree, measure, m);
    auto pair = solve_dirichlet(collapsed.tree, compute_measure(collapsed.tree));
    const double lambda = pair.lambda0;
    out.push_back({m, lambda, std::move(pair), std::move(collapsed)});
  }
  return out;
}

VertexFunction eigen_ratio(const RootedTree& tree, const EigenPair& pair) {
  if (pair.g.size() != tree.size()) {
    throw Error(Errc::MonotonicityViolation, "eigenfunction size does not match the tree");
  }
  for (Vertex i = 1; i < tree.size(); ++i) {
    if (!(pair.g[i] > pair.g[tree.parent(i)])) {
      throw Error(Errc::MonotonicityViolation,
                  "eigenfunction does not increase at vertex " + std::to_string(i));
    }
  }
  return ratio_function(tree, pair.g);
}

VertexFunction flat_extension(const Collapse& collapsed, const EigenPair& pair,
                              const RootedTree& full) {
  if (full.size() != collapsed.source_size || pair.g.size() != collapsed.tree.size() ||
      collapsed.layer > full.max_layer()) {
    throw Error(Errc::LayerMismatch, "eigenpair was not solved on a collapse of this tree");
  }
  VertexFunction f(full.size(), 0.0);
  for (Vertex c = 0; c < collapsed.to_full.size(); ++c) {
    const Vertex i = collapsed.to_full[c];
    if (full.layer(i) != collapsed.tree.layer(c)) {
      throw Error(Errc::LayerMismatch, "collapsed vertex " + std::to_string(c) +
                                           " sits on a different layer in the full tree");
    }
    f[i] = pair.g[c];
  }
  for (Vertex i : full.preorder()) {
    if (full.layer(i) > collapsed.layer) f[i] = f[full.parent(i)];
  }
  return f;
}

std::vector<double> dense_reference_solve(const DirichletMatrix& matrix) {
  const std::size_t d = matrix.dimension;
  if (d > kDenseReferenceLimit) {
    throw Error(Errc::DimensionTooLarge, "dense reference handles at most " +
                                             std::to_string(kDenseReferenceLimit) + " rows");
  }
  auto a = matrix.to_dense();
  auto at = [&](std::size_t r, std::size_t c) -> double& { return a[r * d + c]; };

  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    double diag = 0.0;
    for (std::size_t r = 0; r < d; ++r) {
      diag += at(r, r) * at(r, r);
      for (std::size_t c = r + 1; c < d; ++c) off += at(r, c) * at(r, c);
    }
    if (off == 0.0 || off <= 1e-36 * diag) break;
    for (std::size_t p = 0; p + 1 < d; ++p) {
      for (std::size_t q = p + 1; q < d; ++q) {
        const double apq = at(p, q);
        if (apq == 0.0) continue;
        // Rotation annihilating a_pq (Rutishauser's formulation).
        const double theta = (at(q, q) - at(p, p)) / (2.0 * apq);
        const double t = std::copysign(1.0, theta) / (std::abs(theta) + std::hypot(1.0, theta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        for (std::size_t k = 0; k < d; ++k) {
          const double akp = at(k, p);
          const double akq = at(k, q);
          at(k, p) = c * akp - s * akq;
          at(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < d; ++k) {
          const double apk = at(p, k);
          const double aqk = at(q, k);
          at(p, k) = c * apk - s * aqk;
          at(q, k) = s * apk + c * aqk;
        }
        at(p, q) = 0.0;
        at(q, p) = 0.0;
      }
    }
  }
  std::vector<double> eig(d);
  for (std::size_t r = 0; r < d; ++r) eig[r] = at(r, r);
  std::sort(eig.begin(), eig.end());
  return eig;
}

}  // namespace bdtree
