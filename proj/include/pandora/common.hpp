#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace pandora {

// Absolute tolerance used for value comparisons throughout. All shipped
// instances use small rationals, so 1e-9 sits far below any atom gap.
inline constexpr double kTol = 1e-9;
// Tolerance for probability-mass bookkeeping.
inline constexpr double kProbTol = 1e-12;

inline bool close(double a, double b, double tol = kTol) {
  return std::fabs(a - b) <= tol;
}

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Cap equation has no nonnegative solution: cost exceeds the mean.
struct NegativeCapError : Error {
  using Error::Error;
};

// An enumeration or DP guard was exceeded.
struct TooLargeError : Error {
  using Error::Error;
};

struct UnsupportedConstraintError : Error {
  using Error::Error;
};

// Knapsack sizes not rationally representable within the rescaling cap.
struct UnsupportedExactError : Error {
  using Error::Error;
};

struct ModelMismatchError : Error {
  using Error::Error;
};

struct InfeasibleDeltaError : Error {
  using Error::Error;
};

struct BadParametersError : Error {
  using Error::Error;
};

struct NotMatroidError : Error {
  using Error::Error;
};

struct NotPandoraShapedError : Error {
  using Error::Error;
};

}  // namespace pandora
