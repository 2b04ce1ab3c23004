#pragma once

#include <stdexcept>
#include <string>

namespace witnesskit {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operand shapes do not agree (matrix sides, subsystem splits, vector lengths).
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// An input lies outside the domain of the operation, e.g. an isotropic
/// mixing parameter that makes the state non-positive.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// An iterative routine ran out of budget. Carries the best objective value
/// seen so the caller can still report it.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double best_value, int iterations)
      : Error(what), best_value_(best_value), iterations_(iterations) {}

  double best_value() const noexcept { return best_value_; }
  int iterations() const noexcept { return iterations_; }

 private:
  double best_value_;
  int iterations_;
};

}  // namespace witnesskit
