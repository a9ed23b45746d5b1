#pragma once

#include <stdexcept>
#include <string>

namespace gedanken {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A parameter set violates a precondition that can be checked up front
/// (grid size, resolvability, aperture geometry, config values).
class ConfigurationError : public Error {
 public:
  using Error::Error;
};

/// Tag-state Gram matrix is not a valid overlap matrix.
class InvalidEntanglementError : public Error {
 public:
  using Error::Error;
};

/// A state with zero norm, e.g. an aperture that blocks everything.
class EmptyStateError : public Error {
 public:
  using Error::Error;
};

/// A pattern estimator could not find the features it needs.
class EstimationError : public Error {
 public:
  using Error::Error;
};

/// A physical invariant failed; indicates a numerics bug.
class InvariantViolation : public Error {
 public:
  using Error::Error;
};

}  // namespace gedanken
