#include "bdtree/error.hpp"

namespace bdtree {

std::string_view errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::CycleOrDisconnected: return "CycleOrDisconnected";
    case Errc::NonPositiveRate: return "NonPositiveRate";
    case Errc::RootDegree: return "RootDegree";
    case Errc::DuplicateVertex: return "DuplicateVertex";
    case Errc::RootHasNoPath: return "RootHasNoPath";
    case Errc::LayerOutOfRange: return "LayerOutOfRange";
    case Errc::DegenerateParams: return "DegenerateParams";
    case Errc::RootNotInDomain: return "RootNotInDomain";
    case Errc::NonFiniteInput: return "NonFiniteInput";
    case Errc::BoundaryViolation: return "BoundaryViolation";
    case Errc::ZeroFunction: return "ZeroFunction";
    case Errc::NonPositiveFunction: return "NonPositiveFunction";
    case Errc::InvalidRatio: return "InvalidRatio";
    case Errc::DomainViolation: return "DomainViolation";
    case Errc::InvalidFamily: return "InvalidFamily";
    case Errc::ConvergenceFailure: return "ConvergenceFailure";
    case Errc::MonotonicityViolation: return "MonotonicityViolation";
    case Errc::LayerMismatch: return "LayerMismatch";
    case Errc::DimensionTooLarge: return "DimensionTooLarge";
    case Errc::ParseError: return "ParseError";
    case Errc::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace bdtree
