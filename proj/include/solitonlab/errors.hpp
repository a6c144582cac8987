#pragma once

#include <stdexcept>
#include <string>

namespace solitonlab {

// Base of every deliberate failure the library reports. Catching this is
// enough to distinguish "input/numerics said no" from a programming bug.
struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed call arguments (empty data where N >= 1 is required, bad counts, ...).
struct InvalidInputError : Error {
  using Error::Error;
};

// Degenerate interval or point count passed to a grid builder.
struct InvalidRangeError : Error {
  using Error::Error;
};

// Pivot fell below the relative floor during LU elimination.
struct SingularMatrixError : Error {
  using Error::Error;
};

// An exponent magnitude exceeded the clamp; the result would overflow double.
struct OverflowError : Error {
  using Error::Error;
};

// Closed-form denominator vanished: the evaluation point sits on a pole line.
struct SingularPointError : Error {
  using Error::Error;
};

// A finite-difference stencil leg landed on a singular field sample.
struct StencilOnSingularityError : Error {
  using Error::Error;
};

// Field magnitude at the domain edge too large for the requested operation.
struct BoundaryDecayError : Error {
  using Error::Error;
};

// Doubling the step count moved the answer more than the agreed gate.
struct StepTooCoarseError : Error {
  using Error::Error;
};

// Iteration budget exhausted, or the local derivative vanished.
struct NoConvergenceError : Error {
  using Error::Error;
};

// A root iterate left the open upper half plane.
struct LeftUpperHalfPlaneError : Error {
  using Error::Error;
};

// A sampler produced a singular value where a regular one is required.
struct SingularSampleError : Error {
  using Error::Error;
};

// Transform length is not a power of two.
struct NotPowerOfTwoError : Error {
  using Error::Error;
};

// Scenario configuration rejected; message names the offending field.
struct ConfigError : Error {
  using Error::Error;
};

}  // namespace solitonlab
