#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bdtree/tree.hpp"
#include "bdtree/vertex_function.hpp"

namespace bdtree {

// Generator applied at a non-root vertex:
//   sum_{j child of i} q_ij (f_j - f_i) + q_{i,i*} (f_{i*} - f_i).
double apply_omega(const RootedTree& tree, const VertexFunction& f, Vertex i);

// D(f) = sum_{i != 0} mu_i q_{i,i*} (f_i - f_{i*})^2, requires f(0) == 0.
double dirichlet_form(const RootedTree& tree, const Measure& measure, const VertexFunction& f);

// D(f) / sum_{k != 0} mu_k f_k^2. Always >= lambda0.
double rayleigh_quotient(const RootedTree& tree, const Measure& measure, const VertexFunction& f);

// S_k = sum_{j in T_k} mu_j f_j for every vertex, one post-order pass.
std::vector<double> subtree_weighted_sums(const RootedTree& tree, const Measure& measure,
                                          const VertexFunction& f);

// Single-summation operator
//   I_i(f) = sum_{j in T_i} mu_j f_j / (mu_i q_{i,i*} (f_i - f_{i*})).
// A zero increment yields +inf. Decreasing increments give negative values;
// the caller decides which vertices count.
double single_sum(const RootedTree& tree, const Measure& measure, const VertexFunction& f,
                  Vertex i);
// All vertices at once in O(n); entry 0 is unused (0.0).
std::vector<double> single_sum_all(const RootedTree& tree, const Measure& measure,
                                   const VertexFunction& f);

// Double-summation operator
//   II_i(f) = (1 / f_i) sum_{k in P(i)} S_k / (mu_k q_{k,k*}).
// Needs f > 0 off the root.
double double_sum(const RootedTree& tree, const Measure& measure, const VertexFunction& f,
                  Vertex i);
// All vertices in O(n): S by a post-order pass, path sums by a pre-order pass.
std::vector<double> double_sum_all(const RootedTree& tree, const Measure& measure,
                                   const VertexFunction& f);
// f * II(f), i.e. the path-accumulated sums themselves, with value 0 at the root.
VertexFunction green_potential(const RootedTree& tree, const Measure& measure,
                               const VertexFunction& f);

// Difference-form operator
//   R_i(w) = q_{i,i*} (1 - 1/w_i) + sum_{j child of i} q_ij (1 - w_j), 1/inf == 0.
double ratio_difference(const RootedTree& tree, const VertexFunction& w, Vertex i);

// R with q_{i,i*} replaced by mu_i q_{i,i*} / mu(T_i) on layer m.
double ratio_difference_collapsed(const RootedTree& tree, const Measure& measure,
                                  const VertexFunction& w, int m, Vertex i);

// w_i = u_i / u_{i*}; +inf at the root and at the root's son.
VertexFunction ratio_function(const RootedTree& tree, const VertexFunction& u);

// Largest layer holding a vertex whose value differs from its parent's,
// clamped below at 1. Functions flat beyond it belong to the modified families
// with this cutoff.
int flat_cutoff(const RootedTree& tree, const VertexFunction& f);
// Same for ratio functions: largest layer where w_i != 1.
int ratio_cutoff(const RootedTree& tree, const VertexFunction& w);

enum class Family { F_I, F_II, W, F_I_mod, F_II_mod, W_mod };

std::string_view family_name(Family family) noexcept;
std::optional<Family> parse_family(std::string_view name) noexcept;
bool is_modified(Family family) noexcept;

// A test-function family, with the layer cutoff the modified families carry.
struct DomainTag {
  Family family = Family::F_I;
  std::optional<int> cutoff_layer;

  // Throws InvalidFamily when the cutoff is present for an unmodified family,
  // missing for a modified one, or below 1.
  static DomainTag make(Family family, std::optional<int> cutoff = std::nullopt);

  bool operator==(const DomainTag&) const = default;
};

struct DomainCheck {
  bool admissible = true;
  std::optional<Vertex> vertex;  // first offending vertex, if any
  std::string condition;         // human-readable violated condition

  explicit operator bool() const noexcept { return admissible; }
};

// Membership of f (or w) in the tagged family. Strict inequalities are exact.
DomainCheck check_domain(const RootedTree& tree, const VertexFunction& f, const DomainTag& tag);

}  // namespace bdtree
