#pragma once

#include <stdexcept>
#include <string>

namespace droplet {

/// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Bad argument (wrong sizes, out-of-range parameters, mismatched objects).
struct ArgumentError : Error {
    using Error::Error;
};

/// Evaluation outside the domain of a tabulated potential or grid.
struct DomainError : Error {
    using Error::Error;
};

/// Numeric failure: non-finite values, ill-conditioned moments, stagnation.
struct NumericError : Error {
    using Error::Error;
};

/// The growth certificate for a potential could not be established.
struct GrowthConditionError : NumericError {
    using NumericError::NumericError;
};

/// A quadrature grid is too small for the requested computation.
struct TruncationError : NumericError {
    using NumericError::NumericError;
};

/// Configuration file problems (unknown keys, type mismatches, bad bounds).
struct ConfigError : Error {
    using Error::Error;
};

} // namespace droplet
