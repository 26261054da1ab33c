#pragma once

#include <stdexcept>
#include <string>

namespace qwork {

enum class ErrorKind {
  Parse,
  Validation,
  DimensionMismatch,
  NonConvergence,
  Scheme,
  Argument,
};

// Base of every error thrown by the library. `path` names the offending
// scenario field (e.g. "rho" or "evolution.breakpoints[1].H[0][2]") when
// the error originates from input data, and is empty otherwise.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string code, const std::string& message, std::string path = {})
      : std::runtime_error(path.empty() ? code + ": " + message : path + ": " + code + ": " + message),
        kind_(kind),
        code_(std::move(code)),
        detail_(message),
        path_(std::move(path)) {}

  ErrorKind kind() const noexcept { return kind_; }
  const std::string& code() const noexcept { return code_; }
  const std::string& path() const noexcept { return path_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorKind kind_;
  std::string code_;
  std::string detail_;
  std::string path_;
};

class ParseError : public Error {
 public:
  explicit ParseError(const std::string& message, std::string path = {})
      : Error(ErrorKind::Parse, "ParseError", message, std::move(path)) {}
};

// code is one of NotHermitian, NotUnitary, NotDensity, DimMismatch.
class ValidationError : public Error {
 public:
  ValidationError(std::string code, const std::string& message, std::string path = {})
      : Error(ErrorKind::Validation, std::move(code), message, std::move(path)) {}
};

class DimensionMismatch : public Error {
 public:
  explicit DimensionMismatch(const std::string& message)
      : Error(ErrorKind::DimensionMismatch, "DimensionMismatch", message) {}
};

class NonConvergence : public Error {
 public:
  explicit NonConvergence(const std::string& message)
      : Error(ErrorKind::NonConvergence, "NonConvergence", message) {}
};

// Failures raised by a work-distribution scheme (ImaginaryResidue,
// TrajectoryBudgetExceeded, NotPositive, DecompositionMismatch, NotLinear,
// GridTooNarrow, ...).
class SchemeError : public Error {
 public:
  SchemeError(std::string code, const std::string& message)
      : Error(ErrorKind::Scheme, std::move(code), message) {}
};

class ArgumentError : public Error {
 public:
  explicit ArgumentError(const std::string& message)
      : Error(ErrorKind::Argument, "InvalidArgument", message) {}
};

}  // namespace qwork
