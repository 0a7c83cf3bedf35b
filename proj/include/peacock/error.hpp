#pragma once

#include <stdexcept>
#include <string>

namespace peacock {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input document.
class ParseError : public Error {
 public:
  using Error::Error;
};

// Well-formed input that violates a layout invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Out-of-range or inconsistent parameters.
class ParameterError : public Error {
 public:
  using Error::Error;
};

// Raised when the stress problem has nothing to optimize.
class OptimizerError : public Error {
 public:
  using Error::Error;
};

// Wraps a failure with the name of the pipeline stage it came from.
class StageError : public Error {
 public:
  StageError(std::string stage, const Error& cause)
      : Error(stage + ": " + cause.what()), stage_(std::move(stage)) {}

  const std::string& stage() const noexcept { return stage_; }

 private:
  std::string stage_;
};

}  // namespace peacock
