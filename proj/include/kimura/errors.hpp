#pragma once

#include <stdexcept>
#include <string>

namespace kimura {

/// Base class for all solver errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid configuration (maps to CLI exit code 1).
class ConfigError : public Error {
public:
    using Error::Error;
};

/// A coordinate fell outside the computational domain [delta, 1-delta].
class DomainError : public Error {
public:
    using Error::Error;
};

/// Particle positions left the admissible set (ordering violated or a
/// non-finite value appeared).
class AdmissibleSetError : public Error {
public:
    using Error::Error;
};

/// tau*alpha reached a boundary cell width; the explicit boundary update
/// would produce a negative density.
class StepSizeError : public Error {
public:
    using Error::Error;
};

/// Fixed-point / optimization iteration did not reach tolerance.
class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& msg, double residual_norm)
        : Error(msg), residual_norm(residual_norm) {}
    double residual_norm;
};

/// Explicit Eulerian step exceeded its stability limit.
class CflError : public Error {
public:
    using Error::Error;
};

/// Interpolation was requested outside the data range.
class InterpolationError : public Error {
public:
    using Error::Error;
};

} // namespace kimura
