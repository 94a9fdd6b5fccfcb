#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace mmlab {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated (bad shape, non-positive
/// tolerance, zero vector where a direction is required, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// The optimal margin is (numerically) zero, so every margin bound is vacuous.
class NonSeparableError : public Error {
 public:
  using Error::Error;
};

/// Non-finite state, divergence, or an overflowing quantity.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// An iterative solver hit its iteration cap before certifying convergence.
class SolverError : public Error {
 public:
  using Error::Error;
};

/// Malformed input text. `line()` is 1-based; 0 when not tied to a line.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Inputs that were supposed to describe the same dataset do not.
class DatasetMismatch : public Error {
 public:
  using Error::Error;
};

}  // namespace mmlab
