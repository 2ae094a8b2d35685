#pragma once

namespace panto {

struct LinearProblem {
    double lambda;
    double q;  // in (0, 1)
    double x0;
};

// n-th derivative of the fundamental solution at 0: lambda^n * q^{n(n-1)/2}.
double phi_taylor_coefficient(double lambda, double q, int n);

// Fundamental solution phi of phi'(t) = lambda * phi(qt), phi(0) = 1,
// summed by the term recurrence term_{n+1} = term_n * q^n * lambda*t/(n+1).
// Stops when two consecutive terms fall below tol * max(1, |sum|); hard cap
// 500 terms.
double phi_series(double lambda, double q, double t, double tol = 1e-15);

// x(t) = x0 * phi(t).
double linear_solution(const LinearProblem& lp, double t, double tol = 1e-15);

} // namespace panto
