#pragma once

#include <stdexcept>
#include <string>

namespace replab {

// Base class for every error raised by the library.
struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Shapes of two objects that must agree do not (message carries both shapes).
struct DimensionMismatch : Error {
  using Error::Error;
};

// An argument violates a documented precondition.
struct PreconditionError : Error {
  using Error::Error;
};

// A logarithmic quantity was requested at (or numerically at) the boundary
// where it is infinite, e.g. cross entropy of a state with a zero component
// on the reference support.
struct DivergedToBoundary : Error {
  using Error::Error;
};

// An integrator produced a NaN/Inf state; message carries the step index.
struct NonFiniteState : Error {
  using Error::Error;
};

}  // namespace replab
