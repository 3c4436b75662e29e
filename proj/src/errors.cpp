#include "multippl/errors.hpp"

namespace multippl {

std::string Diagnostic::render(const std::string& file) const {
  return file + ":" + std::to_string(span.line) + ":" + std::to_string(span.col) + ": error[" + code +
         "]: " + message;
}

ParseError::ParseError(Diagnostic d) : std::runtime_error(d.message), diag_(std::move(d)) {}

const char* code_of(TypeErrorKind kind) {
  switch (kind) {
    case TypeErrorKind::TypeMismatch: return "TypeMismatch";
    case TypeErrorKind::UnboundVariable: return "UnboundVariable";
    case TypeErrorKind::NonConvertibleBoundary: return "NonConvertibleBoundary";
    case TypeErrorKind::BoundaryInPureIteBranch: return "BoundaryInPureIteBranch";
    case TypeErrorKind::RecursiveCall: return "RecursiveCall";
    case TypeErrorKind::ImpureTerm: return "ImpureTerm";
    case TypeErrorKind::UnknownFunction: return "UnknownFunction";
  }
  return "TypeError";
}

TypeError::TypeError(TypeErrorKind kind, Span span, const std::string& message)
    : std::runtime_error(message), kind_(kind), diag_{span, code_of(kind), message} {}

const char* code_of(EvalErrorKind kind) {
  switch (kind) {
    case EvalErrorKind::FuelExhausted: return "FuelExhausted";
    case EvalErrorKind::ConversionUnsupported: return "ConversionUnsupported";
    case EvalErrorKind::EmptyList: return "EmptyList";
    case EvalErrorKind::NotEnumerable: return "NotEnumerable";
    case EvalErrorKind::WorldLimitExceeded: return "WorldLimitExceeded";
    case EvalErrorKind::CapacityExhausted: return "CapacityExhausted";
    case EvalErrorKind::MissingWeight: return "MissingWeight";
    case EvalErrorKind::QueryUnsupported: return "QueryUnsupported";
  }
  return "EvalError";
}

EvalError::EvalError(EvalErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(code_of(kind)) + ": " + message), kind_(kind), message_(message) {}

}  // namespace multippl
