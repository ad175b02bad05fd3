#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace thermotomo {

// Invalid inputs, mismatched grids, violated preconditions. The CLI maps
// these to exit code 2.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Point outside the domain of a pointwise query.
class DomainError : public ConfigError {
public:
    using ConfigError::ConfigError;
};

// Malformed binary file; carries the byte offset where reading failed.
class FormatError : public ConfigError {
public:
    FormatError(const std::string& what, std::size_t offset)
        : ConfigError(what + " (at byte offset " + std::to_string(offset) + ")"), offset_(offset) {}
    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

// Failures of the numerics themselves. The CLI maps these to exit code 3.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ConvergenceError : public NumericalError {
public:
    ConvergenceError(const std::string& what, double residual)
        : NumericalError(what + " (final residual " + std::to_string(residual) + ")"), residual_(residual) {}
    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

class InstabilityError : public NumericalError {
public:
    explicit InstabilityError(std::size_t step)
        : NumericalError("non-finite value detected at time step " + std::to_string(step)), step_(step) {}
    std::size_t step() const noexcept { return step_; }

private:
    std::size_t step_;
};

class CompatibilityError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

// Degenerate input for a ratio or power iteration (zero norm, zero energy).
class DegenerateError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

// Ray hits the excluded glancing cases: tangential incidence or exactly the
// critical angle.
class GeometryError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

}  // namespace thermotomo
