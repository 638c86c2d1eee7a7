#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "bdtree/bounds.hpp"
#include "bdtree/spectral.hpp"
#include "fixtures.hpp"

using namespace bdtree;
using namespace fixtures;

namespace {

const double kInf = std::numeric_limits<double>::infinity();

VertexFunction ones(const RootedTree& t) {
  VertexFunction f(t.size(), 1.0);
  f[kRoot] = 0.0;
  return f;
}

}  // namespace

TEST_CASE("path_resistance examples") {
  const auto star = unit_star();
  const auto phi = path_resistance(star, compute_measure(star));
  CHECK(phi[1] == 1.0);
  CHECK(phi[2] == 2.0);
  CHECK(phi[3] == 2.0);

  const auto path = unit_path3();
  const auto pp = path_resistance(path, compute_measure(path));
  CHECK(pp[1] == 1.0);
  CHECK(pp[2] == 2.0);

  // mu_1 q_10 = 2 * 2 = 4.
  const auto two = two_vertex(2, 4);
  CHECK(path_resistance(two, compute_measure(two))[1] == 0.25);
}

TEST_CASE("closed_form_bounds examples") {
  const auto star = unit_star();
  const auto s = closed_form_bounds(star, compute_measure(star));
  CHECK(s.delta == 3.0);
  CHECK(s.argmax_delta == 1);
  CHECK(s.C[1] == 1);
  CHECK(s.C[2] == 1);
  CHECK(s.C[3] == 1);
  CHECK(s.sup_C == 1);
  CHECK(s.lower == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
  CHECK(s.upper == doctest::Approx(1.0 / 3.0).epsilon(1e-15));

  const auto path = unit_path3();
  const auto p = closed_form_bounds(path, compute_measure(path));
  CHECK(p.delta == 2.0);
  CHECK(p.sup_C == 1);
  CHECK(p.lower == 0.25);
  CHECK(p.upper == 0.5);

  for (double a : {0.5, 1.0, 3.0}) {
    const auto two = two_vertex(a, 1.7);
    const auto b = closed_form_bounds(two, compute_measure(two));
    CHECK(rel(b.delta, 1 / a) <= 1e-15);
    CHECK(rel(b.lower, a / 2) <= 1e-15);
    CHECK(rel(b.upper, a) <= 1e-15);
  }
}

TEST_CASE("C_i collapses to 1 on every finite tree") {
  // Sum over a subtree of (|J(k)| - 1) is (edges - vertices) = -1, so each
  // child of i cancels one unit of |J(i)|.
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const auto t = random_tree(seed);
    const auto b = closed_form_bounds(t, compute_measure(t));
    for (Vertex i = 1; i < t.size(); ++i) CHECK(b.C[i] == 1);
    CHECK(b.upper / b.lower == 2.0);
  }
}

TEST_CASE("phi is nondecreasing and sqrt(phi) is in F_I") {
  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    const auto t = random_tree(seed);
    const auto m = compute_measure(t);
    const auto phi = path_resistance(t, m);
    for (Vertex i = 2; i < t.size(); ++i) {
      if (t.parent(i) != kRoot) CHECK(phi[i] > phi[t.parent(i)]);
    }
    CHECK(check_domain(t, sqrt_phi_function(t, m), DomainTag::make(Family::F_I)));
  }
  const auto star = unit_star();
  const auto f = sqrt_phi_function(star, compute_measure(star));
  CHECK(f == VertexFunction({0, 1, std::sqrt(2.0), std::sqrt(2.0)}));
}

// The two-sided estimate reads sup_i I_i(sqrt phi) <= 2 sup_C delta, with C_i
// summing (|J(k)| - 1) over T_s. Those coefficients are -1 at leaves, and
// bounding them by phi_i^{-1/2} goes the wrong way. Dropping the negative
// terms gives a constant that does hold.
namespace {

long long branching_constant(const RootedTree& t, Vertex i) {
  long long c = 1 + static_cast<long long>(t.children(i).size());
  for (Vertex k = 1; k < t.size(); ++k) {
    if (k != i && in_subtree(t, k, i)) {
      c += std::max<long long>(static_cast<long long>(t.children(k).size()) - 1, 0);
    }
  }
  return c;
}

}  // namespace

TEST_CASE("sup I(sqrt phi) against 2 C delta") {
  // Counterexample to the literal constant: seed 1, vertex 3.
  {
    const auto t = random_tree(1);
    const auto m = compute_measure(t);
    const auto b = closed_form_bounds(t, m);
    const auto I = single_sum_all(t, m, sqrt_phi_function(t, m));
    CHECK(b.sup_C == 1);
    CHECK(I[3] == doctest::Approx(477.963986657653).epsilon(1e-12));
    CHECK(2.0 * b.delta == doctest::Approx(459.825310981508).epsilon(1e-12));
    CHECK(I[3] > 2.0 * b.sup_C * b.delta);
  }
  // With negative terms dropped the estimate holds everywhere.
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const auto t = random_tree(seed);
    const auto m = compute_measure(t);
    const auto b = closed_form_bounds(t, m);
    const auto I = single_sum_all(t, m, sqrt_phi_function(t, m));
    for (Vertex i = 1; i < t.size(); ++i) {
      CHECK(I[i] <= 2.0 * branching_constant(t, i) * b.delta * (1 + 1e-12));
    }
  }
}

TEST_CASE("closed-form lower bound is not a certificate on every path") {
  // 12-vertex path with q_up(k) = k and mu_k = k^-2.75.
  std::vector<RawEdge> e;
  double mu_prev = 1.0;
  for (Vertex k = 1; k < 12; ++k) {
    const double mu = std::pow(static_cast<double>(k), -2.75);
    const double up = static_cast<double>(k);
    e.push_back({k, k - 1, up, mu * up / mu_prev});
    mu_prev = mu;
  }
  const auto t = validate_tree(e);
  const auto m = compute_measure(t);
  const auto b = closed_form_bounds(t, m);
  const double lambda = solve_dirichlet(t, m).lambda0;
  const double dense = dense_reference_solve(build_dirichlet_matrix(t, m)).front();
  CHECK(rel(lambda, 0.377677217029416) <= 1e-12);
  CHECK(rel(dense, lambda) <= 1e-12);
  CHECK(rel(b.delta, 1.29421518285037) <= 1e-12);
  CHECK(b.sup_C == 1);
  CHECK(b.upper >= lambda);
  CHECK(b.lower > lambda);  // 0.386334518885 > 0.377677217029
  // The F_I certificate from sqrt(phi) remains valid on the same tree.
  CHECK(lower_bound(t, m, sqrt_phi_function(t, m), DomainTag::make(Family::F_I)).value <= lambda);
}

TEST_CASE("path indicator function examples") {
  const auto star = unit_star();
  const auto ms = compute_measure(star);
  const auto f = path_indicator_function(star, ms, 2);
  CHECK(f == VertexFunction({0, 1, 2, 0}));
  const auto inf2 = increasing_infimum(star, ms, f);
  CHECK(inf2.value == 2.0);
  CHECK(inf2.argmin == 2);

  const auto path = unit_path3();
  const auto mp = compute_measure(path);
  CHECK(path_indicator_function(path, mp, 2) == VertexFunction({0, 1, 2}));
  CHECK(increasing_infimum(path, mp, path_indicator_function(path, mp, 2)).value == 2.0);

  CHECK(path_indicator_function(star, ms, 1) == VertexFunction({0, 1, 1, 1}));
  CHECK_ERRC(path_indicator_function(star, ms, 0), Errc::RootNotInDomain);

  const auto d = path_indicator_delta(star, ms);
  CHECK(d.delta == 3.0);
  CHECK(d.argmax == 1);
}

TEST_CASE("lower_bound examples") {
  const auto star = unit_star();
  const auto ms = compute_measure(star);
  const auto c = lower_bound(star, ms, sqrt_phi_function(star, ms), DomainTag::make(Family::F_I));
  CHECK(c.kind == BoundKind::Lower);
  CHECK(c.value == doctest::Approx(1 / (1 + 2 * std::sqrt(2.0))).epsilon(1e-14));
  CHECK(c.extremal_vertex == 1);
  CHECK(c.per_vertex.size() == 4);

  const auto pair = solve_dirichlet(star, ms);
  const auto w = lower_bound(star, ms, eigen_ratio(star, pair), DomainTag::make(Family::W));
  CHECK(rel(w.value, kStarLambda) <= 1e-12);

  const auto path = unit_path3();
  const auto mp = compute_measure(path);
  const auto g = lower_bound(path, mp, VertexFunction({0, 1, kGolden}), DomainTag::make(Family::F_I));
  CHECK(rel(g.value, kPathLambda) <= 1e-12);

  CHECK_ERRC(lower_bound(star, ms, VertexFunction({0, 1, 1, 2}), DomainTag::make(Family::F_I)),
             Errc::DomainViolation);
  CHECK_ERRC(lower_bound(star, ms, VertexFunction({0, 1, 1, 1}), DomainTag::make(Family::F_I_mod, 1)),
             Errc::InvalidFamily);
}

TEST_CASE("upper_bound examples") {
  const auto star = unit_star();
  const auto ms = compute_measure(star);
  const auto c = upper_bound(star, ms, VertexFunction({0, 1, 1, 1}), DomainTag::make(Family::F_I_mod, 1));
  CHECK(c.kind == BoundKind::Upper);
  CHECK(c.value == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(c.extremal_vertex == 1);

  const auto w = upper_bound(star, ms, VertexFunction({kInf, kInf, 1, 1}),
                             DomainTag::make(Family::W_mod, 1));
  CHECK(w.value == doctest::Approx(1.0 / 3.0).epsilon(1e-15));

  const auto ii = upper_bound(star, ms, VertexFunction({0, 1, 1, 1}), DomainTag::make(Family::F_II_mod, 1));
  CHECK(ii.value == doctest::Approx(1.0 / 3.0).epsilon(1e-15));

  const auto path = unit_path3();
  const auto mp = compute_measure(path);
  const auto g = upper_bound(path, mp, VertexFunction({0, 1, kGolden}), DomainTag::make(Family::F_I_mod, 2));
  CHECK(rel(g.value, kPathLambda) <= 1e-12);

  CHECK_ERRC(upper_bound(star, ms, VertexFunction({0, 1, 2, 2}), DomainTag::make(Family::F_I_mod, 1)),
             Errc::DomainViolation);
  CHECK_ERRC(upper_bound(star, ms, VertexFunction({0, 1, 2, 2}), DomainTag::make(Family::F_I)),
             Errc::InvalidFamily);
}

TEST_CASE("iterate_double_sum") {
  const auto star = unit_star();
  const auto ms = compute_measure(star);
  const auto steps = iterate_double_sum(star, ms, ones(star), 1);
  REQUIRE(steps.size() == 1);
  // (0, 3, 4, 4) rescaled to sup-norm 1.
  CHECK(steps[0].f == VertexFunction({0, 0.75, 1, 1}));
  double expect = kInf;
  const auto II = double_sum_all(star, ms, steps[0].f);
  for (Vertex i = 1; i < 4; ++i) expect = std::min(expect, 1 / II[i]);
  CHECK(steps[0].lower.value == expect);
  CHECK(steps[0].lower.value <= kStarLambda);
  CHECK(steps[0].upper.value >= kStarLambda);

  // The eigenfunction is a fixed point.
  const auto pair = solve_dirichlet(star, ms);
  const auto fixed = iterate_double_sum(star, ms, pair.g, 3);
  for (const auto& s : fixed) {
    CHECK(rel(s.lower.value, kStarLambda) <= 1e-12);
    CHECK(rel(s.upper.value, kStarLambda) <= 1e-12);
  }

  // Fifty steps on the star reach the eigenvalue to 1e-6.
  const auto fifty = iterate_double_sum(star, ms, ones(star), 50);
  CHECK(rel(fifty.back().lower.value, kStarLambda) <= 1e-6);

  CHECK_ERRC(iterate_double_sum(star, ms, ones(star), 0), Errc::DomainViolation);
  CHECK_ERRC(iterate_double_sum(star, ms, VertexFunction({0, 1, 0, 1}), 1), Errc::DomainViolation);
}

TEST_CASE("every iterate brackets the eigenvalue") {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    const auto t = random_tree(seed);
    const auto m = compute_measure(t);
    const double lambda = solve_dirichlet(t, m).lambda0;
    for (const auto& s : iterate_double_sum(t, m, ones(t), 30)) {
      CHECK(s.lower.value <= lambda * (1 + 1e-10));
      CHECK(s.upper.value >= lambda * (1 - 1e-10));
      CHECK(check_domain(t, s.f, DomainTag::make(Family::F_I)));
    }
  }
}
