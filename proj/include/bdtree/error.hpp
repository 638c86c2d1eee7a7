#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace bdtree {

enum class Errc {
  CycleOrDisconnected,
  NonPositiveRate,
  RootDegree,
  DuplicateVertex,
  RootHasNoPath,
  LayerOutOfRange,
  DegenerateParams,
  RootNotInDomain,
  NonFiniteInput,
  BoundaryViolation,
  ZeroFunction,
  NonPositiveFunction,
  InvalidRatio,
  DomainViolation,
  InvalidFamily,
  ConvergenceFailure,
  MonotonicityViolation,
  LayerMismatch,
  DimensionTooLarge,
  ParseError,
  IoError,
};

std::string_view errc_name(Errc code) noexcept;

// Single exception type for the library; callers dispatch on code().
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace bdtree
