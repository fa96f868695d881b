#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dirgamma {

/// Argument outside the mathematical domain of a function.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Caller broke an interface contract (dimension mismatch, bad index, empty input).
class ContractError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An iterative routine failed to produce a usable number.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// No finite objective value could be found around the starting point of a fit.
class InitializationError : public NumericError {
 public:
  using NumericError::NumericError;
};

/// The observed-information matrix could not be inverted.
class SingularityError : public NumericError {
 public:
  SingularityError(const std::string& what, double condition)
      : NumericError(what), condition_(condition) {}

  double condition() const noexcept { return condition_; }

 private:
  double condition_;
};

/// File could not be opened, read or written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input text; `line` is 1-based.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace dirgamma
