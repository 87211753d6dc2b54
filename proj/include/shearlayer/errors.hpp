#pragma once

#include <stdexcept>
#include <string>

namespace shearlayer {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Grid mismatch, malformed sizes, off-node coordinates.
struct DimensionError : Error {
    using Error::Error;
};

// Linear or nonlinear solve failed its residual contract.
struct SolverError : Error {
    using Error::Error;
};

// Shear profile violates the standing hypotheses where a routine needs them.
struct DegenerateProfileError : Error {
    using Error::Error;
};

// Boundary data inconsistent at domain corners.
struct CompatibilityError : Error {
    using Error::Error;
};

struct ConfigError : Error {
    using Error::Error;
};

} // namespace shearlayer
