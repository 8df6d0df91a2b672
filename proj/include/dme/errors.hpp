#pragma once

#include <stdexcept>
#include <string>

namespace dme {

enum class ErrorCode {
  InvalidProbability,
  InvalidEstimate,
  InvalidInterval,
  ZeroCell,
  EmptyMargin,
  EmptyTable,
  ScaleMismatch,
  NullDirection,
  AlreadyNull,
  TargetBeyondEstimate,
  MissingInterval,
  DegenerateGamma2,
  InvalidVariance,
  InvalidGrid,
  MalformedCsv,
};

const char* to_string(ErrorCode code);

// Bad input values. The CLI maps this to exit code 2.
class ValidationError : public std::invalid_argument {
 public:
  ValidationError(ErrorCode code, const std::string& what)
      : std::invalid_argument(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Malformed command line. Exit code 1.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace dme
