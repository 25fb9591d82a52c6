#pragma once

#include <stdexcept>
#include <string>

namespace dilab {

/// Base class for all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Precondition / input-shape violations (CLI maps these to exit 1).
struct InvalidArgument : Error { using Error::Error; };
struct NotHermitian : Error { using Error::Error; };
struct NotUnitary : Error { using Error::Error; };
struct NotUnitaryParam : Error { using Error::Error; };
struct NotPSD : Error { using Error::Error; };
struct NotContraction : Error { using Error::Error; };
struct NotPure : Error { using Error::Error; };
struct NonIntegerRank : Error { using Error::Error; };
struct UnequalDefects : Error { using Error::Error; };
struct NotADilation : Error { using Error::Error; };
struct GridMismatch : Error { using Error::Error; };
struct EmptyFamily : Error { using Error::Error; };
struct ConfigError : Error { using Error::Error; };

// Numerical failures (CLI maps these to exit 2).
struct NoConvergence : Error { using Error::Error; };
struct IllConditioned : Error { using Error::Error; };
struct ResidualTooLarge : Error { using Error::Error; };
struct SingularResolvent : Error { using Error::Error; };

}  // namespace dilab
