#pragma once

#include <stdexcept>
#include <string>

namespace conelab {

/// Base class for every error raised by the library.
class ConeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operands belong to different algebras.
class AlgebraMismatch : public ConeError {
 public:
  using ConeError::ConeError;
};

/// Element (or endomorphism) is not invertible within tolerance.
class SingularError : public ConeError {
 public:
  using ConeError::ConeError;
};

/// Argument lies outside the domain of the operation (e.g. x not in the cone).
class DomainError : public ConeError {
 public:
  using ConeError::ConeError;
};

/// Structural precondition failed (non-idempotent, invalid frame, bad shape).
class ValidationError : public ConeError {
 public:
  using ConeError::ConeError;
};

/// Least-squares fit could not be performed (rank deficient design).
class FitError : public ConeError {
 public:
  using ConeError::ConeError;
};

/// Oracle data do not satisfy the functional equation within tolerance.
class InconsistencyError : public ConeError {
 public:
  using ConeError::ConeError;
};

/// Caller-side contract violated (e.g. models with different Lambda).
class ContractError : public ConeError {
 public:
  using ConeError::ConeError;
};

class InsufficientSamples : public ConeError {
 public:
  using ConeError::ConeError;
};

/// Numerical procedure broke down (finite-difference step underflow, ...).
class NumericError : public ConeError {
 public:
  using ConeError::ConeError;
};

/// Malformed configuration or algorithm/algebra spec string.
class ConfigError : public ConeError {
 public:
  using ConeError::ConeError;
};

}  // namespace conelab
