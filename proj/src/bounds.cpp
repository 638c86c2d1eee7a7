#include "bdtree/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "bdtree/error.hpp"

namespace bdtree {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double inverse(double x) { return std::isinf(x) ? 0.0 : 1.0 / x; }

void require_admissible(const RootedTree& tree, const VertexFunction& f, const DomainTag& tag) {
  const auto check = check_domain(tree, f, tag);
  if (!check) {
    std::string where = check.vertex ? " at vertex " + std::to_string(*check.vertex) : "";
    throw Error(Errc::DomainViolation,
                std::string(family_name(tag.family)) + where + ": " + check.condition);
  }
}

// Evaluations of the operator the family pairs with, one per vertex, and the
// quantity whose inf/sup forms the bound.
struct Evaluation {
  std::vector<double> raw;
  std::vector<double> bound_terms;
};

Evaluation evaluate(const RootedTree& tree, const Measure& measure, const VertexFunction& f,
                    const DomainTag& tag) {
  Evaluation e;
  switch (tag.family) {
    case Family::F_I:
    case Family::F_I_mod:
      e.raw = single_sum_all(tree, measure, f);
      break;
    case Family::F_II:
    case Family::F_II_mod:
      e.raw = double_sum_all(tree, measure, f);
      break;
    case Family::W:
      e.raw.assign(tree.size(), 0.0);
      for (Vertex i = 1; i < tree.size(); ++i) e.raw[i] = ratio_difference(tree, f, i);
      e.bound_terms = e.raw;
      return e;
    case Family::W_mod:
      e.raw.assign(tree.size(), 0.0);
      for (Vertex i = 1; i < tree.size(); ++i) {
        e.raw[i] = ratio_difference_collapsed(tree, measure, f, *tag.cutoff_layer, i);
      }
      e.bound_terms = e.raw;
      return e;
  }
  e.bound_terms.resize(e.raw.size());
  std::transform(e.raw.begin(), e.raw.end(), e.bound_terms.begin(), inverse);
  return e;
}

}  // namespace

std::vector<double> path_resistance(const RootedTree& tree, const Measure& measure) {
  std::vector<double> phi(tree.size(), 0.0);
  const auto order = tree.preorder();
  for (std::size_t k = 1; k < order.size(); ++k) {
    const Vertex j = order[k];
    phi[j] = phi[tree.parent(j)] + 1.0 / (measure.mu[j] * tree.rate_up(j));
  }
  return phi;
}

ClosedFormBounds closed_form_bounds(const RootedTree& tree, const Measure& measure) {
  const std::size_t n = tree.size();
  ClosedFormBounds out;
  out.phi = path_resistance(tree, measure);

  out.delta = 0.0;
  for (Vertex j = 1; j < n; ++j) {
    const double value = measure.subtree_mass[j] * out.phi[j];
    if (value > out.delta) {
      out.delta = value;
      out.argmax_delta = j;
    }
  }

  // excess[k] = sum over T_k of (|J(.)| - 1).
  std::vector<long long> excess(n, 0);
  const auto order = tree.preorder();
  for (std::size_t k = order.size(); k-- > 1;) {
    const Vertex v = order[k];
    excess[v] += static_cast<long long>(tree.children(v).size()) - 1;
    excess[tree.parent(v)] += excess[v];
  }
  out.C.assign(n, 0);
  out.sup_C = 0;
  for (Vertex i = 1; i < n; ++i) {
    long long c = 1 + static_cast<long long>(tree.children(i).size());
    for (Vertex s : tree.children(i)) c += excess[s];
    out.C[i] = c;
    out.sup_C = std::max(out.sup_C, c);
  }
  out.upper = 1.0 / out.delta;
  out.lower = 1.0 / (2.0 * static_cast<double>(out.sup_C) * out.delta);
  return out;
}

VertexFunction sqrt_phi_function(const RootedTree& tree, const Measure& measure) {
  const auto phi = path_resistance(tree, measure);
  VertexFunction f(tree.size(), 0.0);
  for (Vertex j = 1; j < tree.size(); ++j) f[j] = std::sqrt(phi[j]);
  return f;
}

VertexFunction path_indicator_function(const RootedTree& tree, const Measure& measure,
                                       Vertex i0) {
  if (i0 == kRoot || i0 >= tree.size()) {
    throw Error(Errc::RootNotInDomain, "path indicator needs a non-root vertex");
  }
  const auto phi = path_resistance(tree, measure);
  VertexFunction f(tree.size(), 0.0);
  for (Vertex k : path_to_root(tree, i0)) f[k] = phi[k];
  std::vector<Vertex> stack{i0};
  while (!stack.empty()) {
    const Vertex v = stack.back();
    stack.pop_back();
    f[v] = phi[i0];
    for (Vertex c : tree.children(v)) stack.push_back(c);
  }
  return f;
}

RestrictedInfimum increasing_infimum(const RootedTree& tree, const Measure& measure,
                                     const VertexFunction& f) {
  const auto values = single_sum_all(tree, measure, f);
  RestrictedInfimum out{kInf, 0};
  for (Vertex i = 1; i < tree.size(); ++i) {
    if (!(f[i] > f[tree.parent(i)])) continue;
    if (values[i] < out.value) {
      out.value = values[i];
      out.argmin = i;
    }
  }
  return out;
}

PathIndicatorDelta path_indicator_delta(const RootedTree& tree, const Measure& measure) {
  PathIndicatorDelta out;
  for (Vertex i0 = 1; i0 < tree.size(); ++i0) {
    const auto inf = increasing_infimum(tree, measure, path_indicator_function(tree, measure, i0));
    if (inf.value > out.delta) {
      out.delta = inf.value;
      out.argmax = i0;
    }
  }
  return out;
}

BoundCertificate lower_bound(const RootedTree& tree, const Measure& measure,
                             const VertexFunction& witness, const DomainTag& family) {
  if (is_modified(family.family)) {
    throw Error(Errc::InvalidFamily,
                std::string(family_name(family.family)) + " certifies upper bounds only");
  }
  require_admissible(tree, witness, family);
  auto e = evaluate(tree, measure, witness, family);
  BoundCertificate cert{BoundKind::Lower, family, kInf, witness, std::move(e.raw), 0};
  for (Vertex i = 1; i < tree.size(); ++i) {
    if (e.bound_terms[i] < cert.value) {
      cert.value = e.bound_terms[i];
      cert.extremal_vertex = i;
    }
  }
  return cert;
}

BoundCertificate upper_bound(const RootedTree& tree, const Measure& measure,
                             const VertexFunction& witness, const DomainTag& family) {
  if (!is_modified(family.family)) {
    throw Error(Errc::InvalidFamily,
                std::string(family_name(family.family)) + " certifies lower bounds only");
  }
  require_admissible(tree, witness, family);
  auto e = evaluate(tree, measure, witness, family);
  BoundCertificate cert{BoundKind::Upper, family, -kInf, witness, std::move(e.raw), 0};
  for (Vertex i = 1; i < tree.size(); ++i) {
    if (e.bound_terms[i] > cert.value) {
      cert.value = e.bound_terms[i];
      cert.extremal_vertex = i;
    }
  }
  return cert;
}

std::vector<IterationStep> iterate_double_sum(const RootedTree& tree, const Measure& measure,
                                              const VertexFunction& f0, int steps) {
  if (steps < 1) throw Error(Errc::DomainViolation, "iteration needs at least one step");
  require_admissible(tree, f0, DomainTag::make(Family::F_II));
  std::vector<IterationStep> out;
  out.reserve(static_cast<std::size_t>(steps));
  VertexFunction f = f0;
  for (int step = 0; step < steps; ++step) {
    VertexFunction h = green_potential(tree, measure, f);
    double top = 0.0;
    for (double v : h.values()) top = std::max(top, v);
    for (Vertex i = 1; i < h.size(); ++i) h[i] /= top;
    auto lower = lower_bound(tree, measure, h, DomainTag::make(Family::F_II));
    auto upper =
        upper_bound(tree, measure, h, DomainTag::make(Family::F_II_mod, flat_cutoff(tree, h)));
    out.push_back({h, std::move(lower), std::move(upper)});
    f = std::move(h);
  }
  return out;
}

}  // namespace bdtree
