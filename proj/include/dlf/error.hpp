#pragma once

#include <stdexcept>
#include <string>

namespace dlf {

enum class ErrorKind {
  InvalidParameter,
  UnsupportedKind,
  SeparationViolation,
  DegenerateDerivative,
  NonFinite,
  DomainViolation,
  IndexOutOfRange,
  LengthMismatch,
  InsufficientDerivativeOrder,
  StepTooSmall,
  SyntaxError,
  UnknownFunction,
  UnboundVariable,
  MathDomain,
  NotDifferentiable,
  AssemblyError,
  SingularMatrix,
  NewtonDivergence,
  ContourEnclosure,
  ContourIneligible,
  ConfigError,
};

const char* to_string(ErrorKind kind);

/// True for failures of the numerics rather than of the request (bad
/// arguments, malformed input). The CLI maps these to exit code 2.
bool is_numerical(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace dlf
