#pragma once

#include <stdexcept>
#include <string>

namespace hali {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed or inconsistent inputs (bad sizes, unsorted knots, NaN where
/// a finite value is required, ...). Mapped to CLI exit code 1.
class InvalidInput : public Error {
public:
    using Error::Error;
};

/// A numerically valid computation could not be completed (rank collapse,
/// infeasible placement, no dominant frequency, ...). Exit code 2.
class ComputeError : public Error {
public:
    using Error::Error;
};

class GenerationError : public ComputeError {
public:
    using ComputeError::ComputeError;
};

class NoDominantFrequencyError : public ComputeError {
public:
    using ComputeError::ComputeError;
};

/// An imputer cannot run on the given interval (no candidate window, rank
/// collapse, unstable fit). Callers fall back to the next method in the chain.
class ImputerInfeasibleError : public ComputeError {
public:
    using ComputeError::ComputeError;
};

class SeasonalityError : public ComputeError {
public:
    using ComputeError::ComputeError;
};

class DegreeSelectionError : public ComputeError {
public:
    using ComputeError::ComputeError;
};

/// Requested harmonic band crosses the Nyquist frequency; callers truncate D*.
class HarmonicOutOfRangeError : public ComputeError {
public:
    using ComputeError::ComputeError;
};

class DegenerateTestError : public ComputeError {
public:
    using ComputeError::ComputeError;
};

}  // namespace hali
