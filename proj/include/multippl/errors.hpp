#pragma once

#include <stdexcept>
#include <string>

namespace multippl {

/// 1-based source position.
struct Span {
  int line = 0;
  int col = 0;
};

/// A located compile-time diagnostic. Rendered as
/// `file:line:col: error[CODE]: message`.
struct Diagnostic {
  Span span;
  std::string code;
  std::string message;

  std::string render(const std::string& file) const;
};

/// Syntax error. The message lists the expected tokens.
class ParseError : public std::runtime_error {
 public:
  explicit ParseError(Diagnostic d);
  const Diagnostic& diagnostic() const { return diag_; }

 private:
  Diagnostic diag_;
};

enum class TypeErrorKind {
  TypeMismatch,
  UnboundVariable,
  NonConvertibleBoundary,
  BoundaryInPureIteBranch,
  RecursiveCall,
  ImpureTerm,
  UnknownFunction,
};

const char* code_of(TypeErrorKind kind);

class TypeError : public std::runtime_error {
 public:
  TypeError(TypeErrorKind kind, Span span, const std::string& message);
  TypeErrorKind kind() const { return kind_; }
  const Diagnostic& diagnostic() const { return diag_; }

 private:
  TypeErrorKind kind_;
  Diagnostic diag_;
};

enum class EvalErrorKind {
  FuelExhausted,
  ConversionUnsupported,
  EmptyList,
  NotEnumerable,
  WorldLimitExceeded,
  CapacityExhausted,
  MissingWeight,
  QueryUnsupported,
};

const char* code_of(EvalErrorKind kind);

/// Runtime failure of an inference run or oracle.
class EvalError : public std::runtime_error {
 public:
  EvalError(EvalErrorKind kind, const std::string& message);
  EvalErrorKind kind() const { return kind_; }
  const std::string& message() const { return message_; }

 private:
  EvalErrorKind kind_;
  std::string message_;
};

}  // namespace multippl
