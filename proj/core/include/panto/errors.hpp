#pragma once

#include <stdexcept>
#include <string>

namespace panto {

// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Bad configuration or ill-formed problem data.
class ValidationError : public Error {
public:
    using Error::Error;
};

// Evaluation time outside the computed/known interval.
class DomainError : public Error {
public:
    DomainError(const std::string& msg, double lo, double hi)
        : Error(msg), lo_(lo), hi_(hi) {}
    double valid_lo() const { return lo_; }
    double valid_hi() const { return hi_; }

private:
    double lo_, hi_;
};

// Field has no usable inverse for the requested value.
class NotInvertibleError : public Error {
public:
    using Error::Error;
};

// Floating-point overflow during integration; carries the time reached.
class OverflowError : public Error {
public:
    OverflowError(const std::string& msg, double t_reached)
        : Error(msg), t_reached_(t_reached) {}
    double time_reached() const { return t_reached_; }

private:
    double t_reached_;
};

// Fixed-point sweep failed to settle within its iteration budget.
class ConvergenceError : public Error {
public:
    using Error::Error;
};

// Profile violates the junction condition eta'(a) = F(eta(qa)).
class CompatibilityError : public Error {
public:
    CompatibilityError(const std::string& msg, double residual)
        : Error(msg), residual_(residual) {}
    double residual() const { return residual_; }

private:
    double residual_;
};

// Query at a breakpoint a*q^{-k}, where the regularity count is undefined.
class BreakpointError : public Error {
public:
    using Error::Error;
};

// Derivative-jump order outside the supported range.
class UnsupportedOrderError : public Error {
public:
    using Error::Error;
};

} // namespace panto
