#pragma once

#include <stdexcept>
#include <string>

namespace satwave {

/// Base class for all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Domain errors: the request is outside the region where the problem is posed.
struct DomainError : Error {
  using Error::Error;
};

/// The frozen problem has no ground state at this point (V(y)*s(y) >= 1).
struct NotInOmegaError : DomainError {
  using DomainError::DomainError;
};

/// Minimum search iterates left the existence region.
struct LeftOmegaError : DomainError {
  using DomainError::DomainError;
};

/// Solver errors: the computation was well posed but did not converge.
struct SolverError : Error {
  using Error::Error;
};

struct BracketNotFoundError : SolverError {
  using SolverError::SolverError;
};

struct TruncationTooSmallError : SolverError {
  using SolverError::SolverError;
};

struct NoProjectionError : SolverError {
  using SolverError::SolverError;
};

struct MaxIterationsError : SolverError {
  using SolverError::SolverError;
};

struct ConvergedToZeroError : SolverError {
  using SolverError::SolverError;
};

struct NoConvergenceError : SolverError {
  using SolverError::SolverError;
};

struct NoDescentError : SolverError {
  using SolverError::SolverError;
};

struct TrivialSolutionError : SolverError {
  using SolverError::SolverError;
};

struct FitRangeEmptyError : SolverError {
  using SolverError::SolverError;
};

/// Run-configuration errors carry the offending line when known.
struct ConfigError : Error {
  explicit ConfigError(const std::string& msg, int line = -1)
      : Error(line >= 0 ? "config line " + std::to_string(line) + ": " + msg : msg), line_number(line) {}
  int line_number;
};

}  // namespace satwave
