#pragma once

#include <stdexcept>
#include <string>

namespace qpsl {

// Base class for all qpsl failures so callers can catch the whole family.
struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed input file (syntax or schema).
struct ParseError : Error {
  using Error::Error;
};

// Ragged entry grids, mismatched vector sizes.
struct DimensionError : Error {
  using Error::Error;
};

// Sampling grid too coarse for the requested harmonic cutoff.
struct GridError : Error {
  using Error::Error;
};

// Quasimomentum t within angle_tol of the degenerate points {0, pi, 2pi}.
struct DegenerateQuasimomentumError : Error {
  using Error::Error;
};

// Eigenvalue clustering could not decide "same" vs "different".
struct ClusterAmbiguityError : Error {
  using Error::Error;
};

// <v_j, v_j*> numerically zero for a simple eigenvalue.
struct VanishingPairingError : Error {
  using Error::Error;
};

// Dense eigensolver failed to converge, or problem size over budget.
struct SolverError : Error {
  using Error::Error;
};

// Invalid run configuration (CLI surface).
struct ConfigError : Error {
  using Error::Error;
};

}  // namespace qpsl
