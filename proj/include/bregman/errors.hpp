#pragma once

#include <stdexcept>
#include <string>

namespace bregman {

/// Input outside the effective domain of a Legendre function, malformed
/// vectors, or out-of-range parameters.
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A region (C_n intersected with Q_n, or a base set) has become empty.
class InfeasibleRegionError : public std::runtime_error {
public:
    InfeasibleRegionError(const std::string& msg, double lo, double hi)
        : std::runtime_error(msg), lo_(lo), hi_(hi) {}
    double lo() const noexcept { return lo_; }
    double hi() const noexcept { return hi_; }

private:
    double lo_;
    double hi_;
};

/// An inner iterative method (projection, resolvent, root-find) stopped
/// before reaching its tolerance.
class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& msg, double residual)
        : std::runtime_error(msg), residual_(residual) {}
    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

/// A runtime-checked property of the hybrid iteration failed.
class InvariantError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed experiment configuration or unknown registry name.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace bregman
