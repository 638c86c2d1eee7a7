#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "bdtree/operators.hpp"
#include "bdtree/tree.hpp"
#include "bdtree/vertex_function.hpp"

namespace bdtree {

enum class BoundKind { Lower, Upper };

// A one-sided bound on lambda0 together with the witness that produced it.
//
// per_vertex holds the raw operator evaluations (I_i, II_i or R_i) by vertex;
// entry 0 is unused. For the summation families the bound is built from the
// reciprocals of these values.
struct BoundCertificate {
  BoundKind kind = BoundKind::Lower;
  DomainTag family;
  double value = 0.0;
  VertexFunction witness;
  std::vector<double> per_vertex;
  Vertex extremal_vertex = 0;  // vertex attaining the inf (lower) or sup (upper)
};

// phi_j = sum_{k in P(j)} 1 / (mu_k q_{k,k*}); phi(0) = 0.
std::vector<double> path_resistance(const RootedTree& tree, const Measure& measure);

struct ClosedFormBounds {
  double delta = 0.0;
  long long sup_C = 0;
  double lower = 0.0;  // 1 / (2 sup_C delta)
  double upper = 0.0;  // 1 / delta
  std::vector<double> phi;
  std::vector<long long> C;  // entry 0 unused
  Vertex argmax_delta = 0;
};

// delta = max_j mu(T_j) phi_j and
// C_i = 1 + |J(i)| + sum_{s in J(i)} sum_{k in T_s} (|J(k)| - 1).
ClosedFormBounds closed_form_bounds(const RootedTree& tree, const Measure& measure);

// f_j = sqrt(phi_j), a member of F_I on every tree.
VertexFunction sqrt_phi_function(const RootedTree& tree, const Measure& measure);

// phi on the path from i0 to the root, phi_{i0} on the subtree below i0, 0 elsewhere.
VertexFunction path_indicator_function(const RootedTree& tree, const Measure& measure, Vertex i0);

struct RestrictedInfimum {
  double value = 0.0;
  Vertex argmin = 0;
};

// inf of I_i(f) over the vertices where f strictly increases (f_i > f_{i*}).
// Returns +inf when no vertex qualifies.
RestrictedInfimum increasing_infimum(const RootedTree& tree, const Measure& measure,
                                     const VertexFunction& f);

struct PathIndicatorDelta {
  double delta = 0.0;
  Vertex argmax = 0;
};

// max over i0 of the restricted infimum for path_indicator_function(i0).
PathIndicatorDelta path_indicator_delta(const RootedTree& tree, const Measure& measure);

// Lower bound for the families F_I (via I), F_II (via II) and W (via R).
// Throws InvalidFamily for other families and DomainViolation when the
// witness is not admissible.
BoundCertificate lower_bound(const RootedTree& tree, const Measure& measure,
                             const VertexFunction& witness, const DomainTag& family);

// Upper bound for F_I_mod (via I), F_II_mod (via II) and W_mod (via the
// collapsed R). An infinite I_i on the flat tail contributes 0.
BoundCertificate upper_bound(const RootedTree& tree, const Measure& measure,
                             const VertexFunction& witness, const DomainTag& family);

struct IterationStep {
  VertexFunction f;
  BoundCertificate lower;
  BoundCertificate upper;
};

// f_{k+1} = f_k * II(f_k), rescaled to sup-norm 1. Each iterate yields a lower
// certificate (F_II) and an upper certificate (F_II_mod at the iterate's flat
// cutoff). Throws DomainViolation if f0 is not in F_II or steps < 1.
std::vector<IterationStep> iterate_double_sum(const RootedTree& tree, const Measure& measure,
                                              const VertexFunction& f0, int steps);

}  // namespace bdtree
