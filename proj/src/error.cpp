#include "dlf/error.hpp"

namespace dlf {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidParameter: return "invalid-parameter";
    case ErrorKind::UnsupportedKind: return "unsupported-kind";
    case ErrorKind::SeparationViolation: return "separation-violation";
    case ErrorKind::DegenerateDerivative: return "degenerate-derivative";
    case ErrorKind::NonFinite: return "non-finite";
    case ErrorKind::DomainViolation: return "domain-violation";
    case ErrorKind::IndexOutOfRange: return "index-out-of-range";
    case ErrorKind::LengthMismatch: return "length-mismatch";
    case ErrorKind::InsufficientDerivativeOrder: return "insufficient-derivative-order";
    case ErrorKind::StepTooSmall: return "step-too-small";
    case ErrorKind::SyntaxError: return "syntax-error";
    case ErrorKind::UnknownFunction: return "unknown-function";
    case ErrorKind::UnboundVariable: return "unbound-variable";
    case ErrorKind::MathDomain: return "math-domain";
    case ErrorKind::NotDifferentiable: return "not-differentiable";
    case ErrorKind::AssemblyError: return "assembly-error";
    case ErrorKind::SingularMatrix: return "singular-matrix";
    case ErrorKind::NewtonDivergence: return "newton-nonconvergence";
    case ErrorKind::ContourEnclosure: return "contour-enclosure";
    case ErrorKind::ContourIneligible: return "contour-ineligible";
    case ErrorKind::ConfigError: return "config-error";
  }
  return "unknown";
}

bool is_numerical(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::SeparationViolation:
    case ErrorKind::DegenerateDerivative:
    case ErrorKind::NonFinite:
    case ErrorKind::InsufficientDerivativeOrder:
    case ErrorKind::StepTooSmall:
    case ErrorKind::MathDomain:
    case ErrorKind::SingularMatrix:
    case ErrorKind::NewtonDivergence:
    case ErrorKind::ContourEnclosure:
    case ErrorKind::ContourIneligible:
      return true;
    default:
      return false;
  }
}

}  // namespace dlf
