#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "bdtree/tree.hpp"

namespace bdtree {

// A real (possibly +inf) value per vertex. Test functions f keep f(0) == 0;
// ratio functions w keep w(0) == +inf.
class VertexFunction {
 public:
  VertexFunction() = default;
  explicit VertexFunction(std::vector<double> values) : values_(std::move(values)) {}
  VertexFunction(std::size_t n, double fill) : values_(n, fill) {}

  double operator[](Vertex i) const { return values_[i]; }
  double& operator[](Vertex i) { return values_[i]; }
  double at(Vertex i) const { return values_.at(i); }

  std::size_t size() const noexcept { return values_.size(); }
  std::span<const double> values() const noexcept { return values_; }

  bool operator==(const VertexFunction&) const = default;

 private:
  std::vector<double> values_;
};

}  // namespace bdtree
