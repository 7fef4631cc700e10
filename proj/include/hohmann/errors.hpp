#pragma once

#include <stdexcept>
#include <string>

namespace hohmann {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the domain of the operation (e.g. a non-positive radius).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Dynamics evaluated at (or numerically at) the attracting centre.
class SingularityError : public Error {
 public:
  using Error::Error;
};

/// A nondimensional transfer violates the orbit-intersection constraint.
class FeasibilityError : public Error {
 public:
  FeasibilityError(const std::string& what, double constraint_value)
      : Error(what), constraint_value_(constraint_value) {}
  double constraint_value() const noexcept { return constraint_value_; }

 private:
  double constraint_value_;
};

/// A documented precondition does not hold for the given input.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Stationarity equations are degenerate (an impulse of zero length).
class DegeneracyError : public Error {
 public:
  using Error::Error;
};

/// The 2x2 (or 1x1) system of the multiplier elimination is singular.
class PivotError : public Error {
 public:
  using Error::Error;
};

/// The grid oracle found no feasible node.
class EmptyResultError : public Error {
 public:
  using Error::Error;
};

/// Adaptive integration could not proceed (step size underflow).
class PropagationError : public Error {
 public:
  using Error::Error;
};

/// Newton iteration of the BVP solver failed to converge.
class NonconvergenceError : public Error {
 public:
  using Error::Error;
};

/// Mesh refinement would exceed the configured node budget.
class MeshOverflowError : public NonconvergenceError {
 public:
  using NonconvergenceError::NonconvergenceError;
};

/// Malformed scenario configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace hohmann
