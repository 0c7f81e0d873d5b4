#pragma once

#include <stdexcept>
#include <string>

namespace twophoton {

// Parameters that violate a type invariant. The CLI maps this to exit code 2.
class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A numerical precondition of an operation does not hold (exit code 3).
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Time grid too coarse for the spectral content being transformed.
class NyquistError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

// Comb peaks (or wideband peak) not resolved by the grid.
class GridError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

// Averaging window too short for the comb to wash out.
class WindowError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

// Detector resolution shorter than the interferometer delay.
class ResolutionError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

// Sampling density integrates to zero.
class DegenerateDensity : public NumericalError {
public:
    using NumericalError::NumericalError;
};

// Target comb peak lies where the envelope has decayed away.
class UnreachablePeak : public NumericalError {
public:
    using NumericalError::NumericalError;
};

// Excision residual above the acceptable level; carries the residual found.
class PoorMatch : public NumericalError {
public:
    PoorMatch(const std::string& what, double residual)
        : NumericalError(what), residual_(residual) {}
    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

}  // namespace twophoton
