#pragma once

#include <stdexcept>
#include <string>

namespace rsfw {

enum class ErrorKind {
  InvalidArgument,
  DimensionMismatch,
  ParseError,
  ReversibilityViolation,
  Disconnected,
  NonPositiveRate,
  NonPositiveParameter,
  ConvergenceFailure,
  GraphTooLarge,
  EdgeNotInGraph,
  EmptyKeptSet,
  FullKeptSet,
  SingularBlock,
  NotConverged,
  SolverFailure,
  DegreeTooLow,
  DegenerateGraph,
  EmptyComplement,
  ShapeMismatch,
  RadiusDisconnected,
};

const char* to_string(ErrorKind kind) noexcept;

/// Every failure raised by the library carries a machine-readable kind.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace rsfw
