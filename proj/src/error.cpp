#include "holo/error.hpp"

#include <algorithm>
#include <cmath>

#include "holo/types.hpp"

namespace holo {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::TooFewPunctures: return "TooFewPunctures";
    case ErrorKind::DegenerateConfiguration: return "DegenerateConfiguration";
    case ErrorKind::GeometryError: return "GeometryError";
    case ErrorKind::ConstraintSingular: return "ConstraintSingular";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::PoleEvaluation: return "PoleEvaluation";
    case ErrorKind::InvalidIndex: return "InvalidIndex";
    case ErrorKind::PoleOnPath: return "PoleOnPath";
    case ErrorKind::StiffnessFailure: return "StiffnessFailure";
    case ErrorKind::NotParabolic: return "NotParabolic";
    case ErrorKind::DegenerateParabolic: return "DegenerateParabolic";
    case ErrorKind::FrameDegenerate: return "FrameDegenerate";
    case ErrorKind::NotEnoughGenerators: return "NotEnoughGenerators";
    case ErrorKind::LiftNotNormalized: return "LiftNotNormalized";
    case ErrorKind::ValidityError: return "ValidityError";
    case ErrorKind::StencilOutOfDomain: return "StencilOutOfDomain";
    case ErrorKind::EmptyInput: return "EmptyInput";
    case ErrorKind::FiberZeroDimensional: return "FiberZeroDimensional";
    case ErrorKind::SingularFiber: return "SingularFiber";
    case ErrorKind::OutOfDomain: return "OutOfDomain";
    case ErrorKind::PathTooCoarse: return "PathTooCoarse";
    case ErrorKind::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

double chordal_distance(const ProjPoint& a, const ProjPoint& b) {
  if (a.infinite && b.infinite) return 0.0;
  if (a.infinite) return 1.0 / std::sqrt(1.0 + std::norm(b.z));
  if (b.infinite) return 1.0 / std::sqrt(1.0 + std::norm(a.z));
  return std::abs(a.z - b.z) / std::sqrt((1.0 + std::norm(a.z)) * (1.0 + std::norm(b.z)));
}

}  // namespace holo
