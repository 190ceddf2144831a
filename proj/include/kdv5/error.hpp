#pragma once

#include <stdexcept>
#include <string>

namespace kdv5 {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bad input: violated preconditions, malformed configuration, mismatched grids.
class ValidationError : public Error {
public:
    using Error::Error;
};

/// A numerical procedure failed: divergence, singular systems, non-convergence, NaN.
class NumericalError : public Error {
public:
    using Error::Error;
};

/// The Neumann series for the resolvent is not contractive for this input.
class DivergenceError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// The requested dense computation exceeds the configured size budget.
class ResourceLimitError : public Error {
public:
    using Error::Error;
};

}  // namespace kdv5
