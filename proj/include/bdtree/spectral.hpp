#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "bdtree/error.hpp"
#include "bdtree/tree.hpp"
#include "bdtree/vertex_function.hpp"

namespace bdtree {

// The Dirichlet generator restricted to T \ {0} and symmetrised by sqrt(mu):
//   M_ii = q_{i,i*} + sum_{j child} q_ij,  M_{i,i*} = -sqrt(q_{i,i*} q_{i*,i}) for i* != 0.
// Rows are indexed by vertex; row 0 is absent. The matrix is the sum of one
// rank-one element per edge, and the unassembled element rates are kept
// alongside the assembled entries.
struct DirichletMatrix {
  std::size_t dimension = 0;         // n - 1
  std::vector<Vertex> parent;        // by vertex, parent[0] == 0
  std::vector<double> diagonal;      // by vertex, diagonal[0] unused
  std::vector<double> off_diagonal;  // entry (i, parent(i)); 0 when the parent is the root
  std::vector<double> rate_up;       // element rates by child vertex
  std::vector<double> rate_down;
  std::vector<double> sqrt_mu;
  std::vector<Vertex> order;         // parents before children, root excluded

  double entry(Vertex i, Vertex j) const;
  // Row-major dense copy; row r corresponds to vertex r + 1.
  std::vector<double> to_dense() const;
  // v^T M v for v indexed by vertex (v[0] ignored).
  double quadratic_form(std::span<const double> v) const;
};

DirichletMatrix build_dirichlet_matrix(const RootedTree& tree, const Measure& measure);

struct EigenPair {
  double lambda0 = 0.0;
  VertexFunction g;  // g(0) == 0, g(root_son) == 1, strictly increasing away from the root
  double residual = 0.0;  // max_i |Omega g(i) + lambda0 g_i| / max_i |g_i|
};

class ConvergenceFailure : public Error {
 public:
  ConvergenceFailure(const std::string& what, double estimate, double residual)
      : Error(Errc::ConvergenceFailure, what), estimate_(estimate), residual_(residual) {}
  double estimate() const noexcept { return estimate_; }
  double residual() const noexcept { return residual_; }

 private:
  double estimate_;
  double residual_;
};

// Smallest eigenvalue by bisection on the inertia of M - sigma, where the
// inertia comes from eliminating the tree leaves-first (no fill-in). The
// eliminated pivots are carried as their excess over the edge's up-rate, which
// keeps the recursion free of cancellation. The eigenvector follows from the
// same elimination: g_c / g_{c*} = q_{c,c*} / pivot_c. Deterministic.
// Throws ConvergenceFailure past the iteration cap or the residual bound.
EigenPair smallest_eigenpair(const DirichletMatrix& matrix);

// Convenience: builds the matrix and solves.
EigenPair solve_dirichlet(const RootedTree& tree, const Measure& measure);

struct ApproxEntry {
  int layer = 0;
  double lambda0 = 0.0;
  EigenPair pair;
  Collapse collapsed;
};

// lambda0 of the tree collapsed at each layer. Layers must be strictly
// ascending within 1..max_layer (LayerOutOfRange otherwise).
std::vector<ApproxEntry> lambda0_sequence(const RootedTree& tree, const Measure& measure,
                                          std::span<const int> layers);

// w_i = g_i / g_{i*}, +inf at the root and its son.
// Throws MonotonicityViolation if g fails to increase along some edge.
VertexFunction eigen_ratio(const RootedTree& tree, const EigenPair& pair);

// Lifts an eigenfunction of the collapsed tree to the full tree, constant on
// every subtree hanging below the collapse layer.
VertexFunction flat_extension(const Collapse& collapsed, const EigenPair& pair,
                              const RootedTree& full);

inline constexpr std::size_t kDenseReferenceLimit = 64;

// Full spectrum, ascending, by cyclic Jacobi rotations on the assembled dense
// matrix. Throws DimensionTooLarge above kDenseReferenceLimit.
std::vector<double> dense_reference_solve(const DirichletMatrix& matrix);

}  // namespace bdtree
