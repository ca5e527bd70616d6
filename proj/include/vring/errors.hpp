#pragma once

#include <stdexcept>
#include <string>

namespace vring {

// Invalid numeric input or an argument outside an operation's domain.
struct DomainError : std::domain_error {
    explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

// Kernel evaluation at coincident points, where the Green's function diverges.
struct SingularityError : DomainError {
    explicit SingularityError(const std::string& what) : DomainError(what) {}
};

// Adaptive quadrature failed to reach the requested tolerance. Carries the
// best estimate so callers that can tolerate a looser answer may recover.
struct AccuracyError : std::runtime_error {
    AccuracyError(const std::string& what, double best, double error_estimate)
        : std::runtime_error(what), best_estimate(best), achieved_tol(error_estimate) {}
    double best_estimate;
    double achieved_tol;
};

// Time step exceeds the advective CFL bound for the current velocity field.
struct StepSizeError : DomainError {
    explicit StepSizeError(const std::string& what) : DomainError(what) {}
};

// Constraint set is empty on the given grid (impulse target unreachable).
struct InfeasibleError : DomainError {
    explicit InfeasibleError(const std::string& what) : DomainError(what) {}
};

// Malformed snapshot or config input.
struct IoError : std::runtime_error {
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace vring
