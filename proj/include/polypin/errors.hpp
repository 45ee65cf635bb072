#pragma once

#include <stdexcept>
#include <string>

namespace polypin {

/// Invalid user-supplied parameter (odd T, odd horizon, out-of-range exponent, ...).
/// The CLI maps this to exit code 2.
class ParameterError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Argument outside the domain of an analytic formula. Carries the boundary value.
class DomainError : public std::domain_error {
public:
    DomainError(const std::string& what, double boundary)
        : std::domain_error(what), boundary_(boundary) {}
    double boundary() const noexcept { return boundary_; }

private:
    double boundary_;
};

/// Root finder failed to converge.
class SolverError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A horizon is too short for the requested tail accuracy.
class HorizonError : public std::runtime_error {
public:
    HorizonError(const std::string& what, double achievable)
        : std::runtime_error(what), achievable_(achievable) {}
    /// Best tail defect reachable with the given horizon.
    double achievable() const noexcept { return achievable_; }

private:
    double achievable_;
};

/// Round-off outside the expected envelope (e.g. FFT output too negative).
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Run refused by the desk-scale guardrails.
class InfeasibleError : public std::runtime_error {
public:
    InfeasibleError(const std::string& what, double estimated_ops)
        : std::runtime_error(what), estimated_ops_(estimated_ops) {}
    double estimated_ops() const noexcept { return estimated_ops_; }

private:
    double estimated_ops_;
};

} // namespace polypin
