#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace holo {

enum class ErrorKind {
  TooFewPunctures,
  DegenerateConfiguration,
  GeometryError,
  ConstraintSingular,
  DimensionMismatch,
  PoleEvaluation,
  InvalidIndex,
  PoleOnPath,
  StiffnessFailure,
  NotParabolic,
  DegenerateParabolic,
  FrameDegenerate,
  NotEnoughGenerators,
  LiftNotNormalized,
  ValidityError,
  StencilOutOfDomain,
  EmptyInput,
  FiberZeroDimensional,
  SingularFiber,
  OutOfDomain,
  PathTooCoarse,
  ConfigError,
};

std::string_view to_string(ErrorKind kind);

// Every failure raised by the library carries a machine-readable kind; the
// message is for humans.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace holo
