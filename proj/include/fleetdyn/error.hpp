#pragma once

#include <stdexcept>
#include <string>

namespace fleetdyn {

/// Root of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A value violates a type invariant or an operation precondition.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Malformed text input (CSV rows, config lines).
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  explicit ParseError(const std::string& what) : Error(what), line_(0) {}

  /// 1-based line number, 0 when the error is not tied to a line.
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// A query falls outside the time span covered by a trajectory or series.
class RangeError : public Error {
 public:
  using Error::Error;
};

/// The state became non-finite during integration.
class IntegrationError : public Error {
 public:
  using Error::Error;
};

/// The modified model has no monotone fixed point (Delta <= 0).
class NoFixedPointError : public Error {
 public:
  using Error::Error;
};

/// Delta is zero to working precision; gradients are singular there.
class DegenerateError : public Error {
 public:
  using Error::Error;
};

/// A finite-difference perturbation left the valid parameter region.
class OracleInvalidError : public Error {
 public:
  using Error::Error;
};

}  // namespace fleetdyn
