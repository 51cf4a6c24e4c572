#pragma once

#include <stdexcept>
#include <string>

namespace dirac {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed problem, rhs, or family document.
class ParseError : public Error {
public:
    using Error::Error;
};

/// A ProblemSpec (or other input) violates one of its invariants.
class ValidationError : public Error {
public:
    using Error::Error;
};

/// Numerical failure: overflow, missed or degenerate roots, extrapolation breakdown.
class NumericalError : public Error {
public:
    using Error::Error;
};

/// Trajectory magnitude exceeded the configured cap.
class OverflowError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// The spectral parameter is too close to an eigenvalue for a resolvent-type evaluation.
class NearSpectrumError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// Two sampled objects do not share the same grid.
class GridMismatchError : public Error {
public:
    using Error::Error;
};

}  // namespace dirac
