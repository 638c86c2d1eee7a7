#pragma once

#include <cmath>
#include <vector>

#include "bdtree/tree.hpp"

namespace fixtures {

using bdtree::RawEdge;
using bdtree::RootedTree;

inline RootedTree unit_star() {
  const std::vector<RawEdge> e = {{1, 0, 1, 1}, {2, 1, 1, 1}, {3, 1, 1, 1}};
  return bdtree::validate_tree(e);
}

inline RootedTree unit_path3() {
  const std::vector<RawEdge> e = {{1, 0, 1, 1}, {2, 1, 1, 1}};
  return bdtree::validate_tree(e);
}

inline RootedTree two_vertex(double up, double down) {
  const std::vector<RawEdge> e = {{1, 0, up, down}};
  return bdtree::validate_tree(e);
}

// Path 0-1-...-(n-1) with unit rates.
inline RootedTree unit_path(std::size_t n) {
  std::vector<RawEdge> e;
  for (std::size_t v = 1; v < n; ++v) e.push_back({v, v - 1, 1, 1});
  return bdtree::validate_tree(e);
}

inline RootedTree random_path(std::uint64_t seed, std::size_t max_vertices = 50) {
  bdtree::RandomTreeOptions o;
  o.max_vertices = max_vertices;
  o.path_bias = 1.0;
  return bdtree::random_tree(seed, o);
}

inline double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

inline const double kSqrt3 = std::sqrt(3.0);
inline const double kSqrt5 = std::sqrt(5.0);
inline const double kStarLambda = 2.0 - kSqrt3;
inline const double kPathLambda = (3.0 - kSqrt5) / 2.0;
inline const double kGolden = (1.0 + kSqrt5) / 2.0;

}  // namespace fixtures

#include "bdtree/error.hpp"

// Runs `expr` and checks it throws bdtree::Error with the given code.
#define CHECK_ERRC(expr, errc)                                   \
  do {                                                           \
    bool thrown_ = false;                                        \
    try {                                                        \
      (void)(expr);                                              \
    } catch (const bdtree::Error& e_) {                          \
      thrown_ = true;                                            \
      CHECK_MESSAGE(e_.code() == (errc), e_.what());             \
    }                                                            \
    CHECK_MESSAGE(thrown_, "expected " #errc " from " #expr);    \
  } while (0)
