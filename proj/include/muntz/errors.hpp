#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace muntz {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Structurally invalid input: sizes, configs, monotonicity.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A materialized exponent sequence is not strictly increasing.
class MonotonicityError : public ValidationError {
 public:
  MonotonicityError(std::size_t index, const std::string& what)
      : ValidationError(what), index_(index) {}
  /// First index i with r_i >= r_{i+1} (or the offending r_0).
  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

/// Precision ran out, or a computed quantity left its theoretical range.
class NumericalFailure : public Error {
 public:
  explicit NumericalFailure(const std::string& what, std::size_t iteration = 0)
      : Error(what), iteration_(iteration) {}
  /// Elevation iteration at which the failure surfaced (0 when not applicable).
  std::size_t iteration() const noexcept { return iteration_; }
  NumericalFailure at_iteration(std::size_t iteration) const {
    return NumericalFailure(what(), iteration);
  }

 private:
  std::size_t iteration_;
};

}  // namespace muntz
