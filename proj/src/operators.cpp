#include "bdtree/operators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "bdtree/error.hpp"

namespace bdtree {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_non_root(const RootedTree& tree, Vertex i) {
  if (i == kRoot) throw Error(Errc::RootNotInDomain, "operators are defined off the root only");
  if (i >= tree.size()) throw Error(Errc::RootNotInDomain, "vertex out of range");
}

void require_size(const RootedTree& tree, const VertexFunction& f) {
  if (f.size() != tree.size()) {
    throw Error(Errc::NonFiniteInput, "function has " + std::to_string(f.size()) +
                                          " values for a tree of " + std::to_string(tree.size()));
  }
}

void require_finite(const VertexFunction& f) {
  for (Vertex i = 0; i < f.size(); ++i) {
    if (!std::isfinite(f[i])) {
      throw Error(Errc::NonFiniteInput, "value at vertex " + std::to_string(i) + " is not finite");
    }
  }
}

void require_boundary(const VertexFunction& f) {
  if (f[kRoot] != 0.0) throw Error(Errc::BoundaryViolation, "f(0) must be 0");
}

void require_positive(const VertexFunction& f) {
  for (Vertex i = 1; i < f.size(); ++i) {
    if (!(f[i] > 0.0)) {
      throw Error(Errc::NonPositiveFunction,
                  "value at vertex " + std::to_string(i) + " must be positive");
    }
  }
}

double reciprocal(double w) { return std::isinf(w) ? 0.0 : 1.0 / w; }

double increment_quotient(double numerator, double flux) {
  if (flux == 0.0) return kInf;
  return numerator / flux;
}

std::string vertex_text(Vertex i) { return "vertex " + std::to_string(i); }

}  // namespace

double apply_omega(const RootedTree& tree, const VertexFunction& f, Vertex i) {
  require_non_root(tree, i);
  require_size(tree, f);
  const Vertex p = tree.parent(i);
  if (!std::isfinite(f[i]) || !std::isfinite(f[p])) {
    throw Error(Errc::NonFiniteInput, "apply_omega needs finite values around " + vertex_text(i));
  }
  double out = tree.rate_up(i) * (f[p] - f[i]);
  for (Vertex j : tree.children(i)) {
    if (!std::isfinite(f[j])) {
      throw Error(Errc::NonFiniteInput, "apply_omega needs finite values around " + vertex_text(i));
    }
    out += tree.rate_down(j) * (f[j] - f[i]);
  }
  return out;
}

double dirichlet_form(const RootedTree& tree, const Measure& measure, const VertexFunction& f) {
  require_size(tree, f);
  require_finite(f);
  require_boundary(f);
  double sum = 0.0;
  for (Vertex i = 1; i < tree.size(); ++i) {
    const double d = f[i] - f[tree.parent(i)];
    sum += measure.mu[i] * tree.rate_up(i) * d * d;
  }
  return sum;
}

double rayleigh_quotient(const RootedTree& tree, const Measure& measure, const VertexFunction& f) {
  const double energy = dirichlet_form(tree, measure, f);
  double mass = 0.0;
  for (Vertex k = 1; k < tree.size(); ++k) mass += measure.mu[k] * f[k] * f[k];
  if (mass == 0.0) throw Error(Errc::ZeroFunction, "rayleigh quotient of the zero function");
  return energy / mass;
}

std::vector<double> subtree_weighted_sums(const RootedTree& tree, const Measure& measure,
                                          const VertexFunction& f) {
  require_size(tree, f);
  std::vector<double> s(tree.size());
  for (Vertex i = 0; i < tree.size(); ++i) s[i] = measure.mu[i] * f[i];
  const auto order = tree.preorder();
  for (std::size_t k = order.size(); k-- > 1;) s[tree.parent(order[k])] += s[order[k]];
  return s;
}

double single_sum(const RootedTree& tree, const Measure& measure, const VertexFunction& f,
                  Vertex i) {
  require_non_root(tree, i);
  require_size(tree, f);
  require_finite(f);
  // Sum over T_i by an explicit walk so one vertex costs O(|T_i|).
  double numerator = 0.0;
  std::vector<Vertex> stack{i};
  while (!stack.empty()) {
    const Vertex v = stack.back();
    stack.pop_back();
    numerator += measure.mu[v] * f[v];
    for (Vertex c : tree.children(v)) stack.push_back(c);
  }
  const double flux = measure.mu[i] * tree.rate_up(i) * (f[i] - f[tree.parent(i)]);
  return increment_quotient(numerator, flux);
}

std::vector<double> single_sum_all(const RootedTree& tree, const Measure& measure,
                                   const VertexFunction& f) {
  require_finite(f);
  const auto s = subtree_weighted_sums(tree, measure, f);
  std::vector<double> out(tree.size(), 0.0);
  for (Vertex i = 1; i < tree.size(); ++i) {
    const double flux = measure.mu[i] * tree.rate_up(i) * (f[i] - f[tree.parent(i)]);
    out[i] = increment_quotient(s[i], flux);
  }
  return out;
}

VertexFunction green_potential(const RootedTree& tree, const Measure& measure,
                               const VertexFunction& f) {
  require_size(tree, f);
  require_finite(f);
  const auto s = subtree_weighted_sums(tree, measure, f);
  VertexFunction h(tree.size(), 0.0);
  const auto order = tree.preorder();
  for (std::size_t k = 1; k < order.size(); ++k) {
    const Vertex i = order[k];
    h[i] = h[tree.parent(i)] + s[i] / (measure.mu[i] * tree.rate_up(i));
  }
  return h;
}

std::vector<double> double_sum_all(const RootedTree& tree, const Measure& measure,
                                   const VertexFunction& f) {
  require_size(tree, f);
  require_finite(f);
  require_positive(f);
  const auto h = green_potential(tree, measure, f);
  std::vector<double> out(tree.size(), 0.0);
  for (Vertex i = 1; i < tree.size(); ++i) out[i] = h[i] / f[i];
  return out;
}

double double_sum(const RootedTree& tree, const Measure& measure, const VertexFunction& f,
                  Vertex i) {
  require_non_root(tree, i);
  require_size(tree, f);
  require_finite(f);
  if (!(f[i] > 0.0)) {
    throw Error(Errc::NonPositiveFunction, "value at " + vertex_text(i) + " must be positive");
  }
  const auto s = subtree_weighted_sums(tree, measure, f);
  double sum = 0.0;
  for (Vertex k = i; k != kRoot; k = tree.parent(k)) {
    sum += s[k] / (measure.mu[k] * tree.rate_up(k));
  }
  return sum / f[i];
}

namespace {

void require_ratio(const VertexFunction& w, Vertex i) {
  if (std::isnan(w[i]) || !(w[i] > 0.0)) {
    throw Error(Errc::InvalidRatio, "ratio at " + vertex_text(i) + " must be positive");
  }
}

double children_term(const RootedTree& tree, const VertexFunction& w, Vertex i) {
  double sum = 0.0;
  for (Vertex j : tree.children(i)) {
    require_ratio(w, j);
    sum += tree.rate_down(j) * (1.0 - w[j]);
  }
  return sum;
}

}  // namespace

double ratio_difference(const RootedTree& tree, const VertexFunction& w, Vertex i) {
  require_non_root(tree, i);
  require_size(tree, w);
  require_ratio(w, i);
  return tree.rate_up(i) * (1.0 - reciprocal(w[i])) + children_term(tree, w, i);
}

double ratio_difference_collapsed(const RootedTree& tree, const Measure& measure,
                                  const VertexFunction& w, int m, Vertex i) {
  require_non_root(tree, i);
  require_size(tree, w);
  if (m < 1 || m > tree.max_layer()) {
    throw Error(Errc::LayerOutOfRange, "cutoff layer " + std::to_string(m) + " outside 1.." +
                                           std::to_string(tree.max_layer()));
  }
  require_ratio(w, i);
  double up = tree.rate_up(i);
  if (tree.layer(i) == m) up = measure.mu[i] * up / measure.subtree_mass[i];
  return up * (1.0 - reciprocal(w[i])) + children_term(tree, w, i);
}

VertexFunction ratio_function(const RootedTree& tree, const VertexFunction& u) {
  require_size(tree, u);
  VertexFunction w(tree.size(), kInf);
  for (Vertex i = 1; i < tree.size(); ++i) {
    const Vertex p = tree.parent(i);
    if (p == kRoot) continue;
    w[i] = u[i] / u[p];
  }
  return w;
}

int flat_cutoff(const RootedTree& tree, const VertexFunction& f) {
  require_size(tree, f);
  int cutoff = 1;
  for (Vertex i = 1; i < tree.size(); ++i) {
    if (f[i] != f[tree.parent(i)]) cutoff = std::max(cutoff, tree.layer(i));
  }
  return cutoff;
}

int ratio_cutoff(const RootedTree& tree, const VertexFunction& w) {
  require_size(tree, w);
  int cutoff = 1;
  for (Vertex i = 1; i < tree.size(); ++i) {
    if (w[i] != 1.0) cutoff = std::max(cutoff, tree.layer(i));
  }
  return cutoff;
}

std::string_view family_name(Family family) noexcept {
  switch (family) {
    case Family::F_I: return "F_I";
    case Family::F_II: return "F_II";
    case Family::W: return "W";
    case Family::F_I_mod: return "F_I_mod";
    case Family::F_II_mod: return "F_II_mod";
    case Family::W_mod: return "W_mod";
  }
  return "?";
}

std::optional<Family> parse_family(std::string_view name) noexcept {
  for (Family f : {Family::F_I, Family::F_II, Family::W, Family::F_I_mod, Family::F_II_mod,
                   Family::W_mod}) {
    if (family_name(f) == name) return f;
  }
  return std::nullopt;
}

bool is_modified(Family family) noexcept {
  return family == Family::F_I_mod || family == Family::F_II_mod || family == Family::W_mod;
}

DomainTag DomainTag::make(Family family, std::optional<int> cutoff) {
  if (is_modified(family) != cutoff.has_value()) {
    throw Error(Errc::InvalidFamily, std::string(family_name(family)) +
                                         (cutoff ? " takes no cutoff layer" : " needs a cutoff layer"));
  }
  if (cutoff && *cutoff < 1) throw Error(Errc::InvalidFamily, "cutoff layer must be >= 1");
  return DomainTag{family, cutoff};
}

namespace {

DomainCheck violation(std::optional<Vertex> v, std::string condition) {
  return DomainCheck{false, v, std::move(condition)};
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(12);
  os << x;
  return os.str();
}

DomainCheck check_test_function(const RootedTree& tree, const VertexFunction& f, Family family,
                                int cutoff) {
  if (f[kRoot] != 0.0) return violation(kRoot, "f(0) = " + fmt(f[kRoot]) + " must be 0");
  for (Vertex i = 1; i < tree.size(); ++i) {
    const Vertex p = tree.parent(i);
    const std::string here = "f(" + std::to_string(i) + ") = " + fmt(f[i]);
    const std::string there = "f(" + std::to_string(p) + ") = " + fmt(f[p]);
    if (!std::isfinite(f[i])) return violation(i, here + " must be finite");
    const bool strict = family == Family::F_I ||
                        (family == Family::F_I_mod && tree.layer(i) <= cutoff);
    const bool flat = (family == Family::F_I_mod || family == Family::F_II_mod) &&
                      tree.layer(i) >= cutoff + 1;
    if (!(f[i] > 0.0)) return violation(i, here + " must be positive");
    if (strict && !(f[i] > f[p])) return violation(i, here + " must exceed parent " + there);
    if (flat && f[i] != f[p]) {
      return violation(i, here + " must equal parent " + there + " beyond layer " +
                              std::to_string(cutoff));
    }
  }
  return {};
}

DomainCheck check_ratio_function(const RootedTree& tree, const VertexFunction& w, Family family,
                                 int cutoff) {
  if (!(std::isinf(w[kRoot]) && w[kRoot] > 0.0)) {
    return violation(kRoot, "w(0) = " + fmt(w[kRoot]) + " must be +inf");
  }
  for (Vertex i = 1; i < tree.size(); ++i) {
    const std::string here = "w(" + std::to_string(i) + ") = " + fmt(w[i]);
    if (std::isnan(w[i])) return violation(i, here + " is NaN");
    if (std::isinf(w[i]) && (w[i] < 0.0 || tree.parent(i) != kRoot)) {
      return violation(i, here + " may be infinite only at the root's son");
    }
    if (family == Family::W_mod && tree.layer(i) >= cutoff + 1) {
      if (w[i] != 1.0) {
        return violation(i, here + " must equal 1 beyond layer " + std::to_string(cutoff));
      }
      continue;
    }
    if (!(w[i] > 1.0)) return violation(i, here + " must exceed 1");
    if (family == Family::W_mod) {
      double weighted = 0.0;
      double total = 0.0;
      for (Vertex j : tree.children(i)) {
        if (std::isnan(w[j]) || std::isinf(w[j])) {
          return violation(j, "w(" + std::to_string(j) + ") must be finite");
        }
        weighted += tree.rate_down(j) * w[j];
        total += tree.rate_down(j);
      }
      const double rhs = tree.rate_up(i) * (1.0 - reciprocal(w[i])) + total;
      if (!(weighted < rhs)) {
        return violation(i, "sum_j q_ij w_j = " + fmt(weighted) + " must be < " + fmt(rhs) +
                                " at vertex " + std::to_string(i));
      }
    }
  }
  return {};
}

}  // namespace

DomainCheck check_domain(const RootedTree& tree, const VertexFunction& f, const DomainTag& tag) {
  if (f.size() != tree.size()) {
    return violation(std::nullopt, "function has " + std::to_string(f.size()) +
                                       " values, tree has " + std::to_string(tree.size()));
  }
  if (is_modified(tag.family) != tag.cutoff_layer.has_value()) {
    return violation(std::nullopt, "cutoff layer presence does not match the family");
  }
  const int cutoff = tag.cutoff_layer.value_or(tree.max_layer());
  if (cutoff < 1 || cutoff > tree.max_layer()) {
    return violation(std::nullopt, "cutoff layer " + std::to_string(cutoff) + " outside 1.." +
                                       std::to_string(tree.max_layer()));
  }
  switch (tag.family) {
    case Family::F_I:
    case Family::F_II:
    case Family::F_I_mod:
    case Family::F_II_mod:
      return check_test_function(tree, f, tag.family, cutoff);
    case Family::W:
    case Family::W_mod:
      return check_ratio_function(tree, f, tag.family, cutoff);
  }
  return violation(std::nullopt, "unknown family");
}

}  // namespace bdtree
