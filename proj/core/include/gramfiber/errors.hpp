#pragma once

#include <stdexcept>
#include <string>

namespace gramfiber {

/// Base class for all library failures.
struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Mismatched monomial orders, matrix sizes or basis lengths.
struct DimensionError : Error {
  using Error::Error;
};

/// A basis passed to an operation that requires linear independence is
/// numerically dependent. Carries the detected rank.
struct DependentBasisError : Error {
  DependentBasisError(const std::string& what, int detected_rank)
      : Error(what), rank(detected_rank) {}
  int rank;
};

/// Input form violates a genericity precondition (real or repeated zeros,
/// vanishing leading coefficient, ...).
struct DegenerateFormError : Error {
  using Error::Error;
};

/// An iterative method did not converge within its budget.
struct ConvergenceError : Error {
  using Error::Error;
};

/// Matrix required to be positive semidefinite is not.
struct NotPsdError : Error {
  using Error::Error;
};

/// Operation invoked on a direction of the wrong classification.
struct WrongClassError : Error {
  using Error::Error;
};

/// Gram slice of an infeasible (non-sos) form.
struct InfeasibleError : Error {
  using Error::Error;
};

/// Quadratic contact form is singular: the normal cone boundary
/// degenerates and cannot be inverted.
struct DegenerateContactError : Error {
  using Error::Error;
};

/// Rejection sampler failed to reach the required acceptance rate.
struct SamplingError : Error {
  using Error::Error;
};

}  // namespace gramfiber
