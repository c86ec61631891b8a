#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace deconv {

// Error categories. The CLI maps each category to a fixed exit code, so new
// errors should derive from one of these rather than from Error directly.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Operands disagree on lattice dimension or arithmetic mode.
class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class ModeMismatch : public DimensionMismatch {
 public:
  using DimensionMismatch::DimensionMismatch;
};

/// A documented precondition of an operation does not hold.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

class DivisionByZero : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

/// A truncated inverse series is too short for the signal it is applied to.
class InsufficientTruncation : public Error {
 public:
  InsufficientTruncation(long required_half_width, const std::string& what)
      : Error(what), required_(required_half_width) {}
  /// Smallest half-width N that satisfies the sufficient margin rule.
  long required_half_width() const noexcept { return required_; }

 private:
  long required_;
};

}  // namespace deconv
