#pragma once

#include "panto/trajectory.hpp"

namespace panto {

struct SolveConfig {
    // a > 0: uniform steps per segment [aq^{-k}, aq^{-(k+1)}].
    // a = 0: also caps the step size at 1/steps_per_segment per unit time
    // once the geometric bootstrap has grown that far.
    int steps_per_segment = 64;

    // a = 0 bootstrap: initial step and geometric growth factor. A zero h0
    // means "use 1e-3 * max(1, t_end)".
    double h0 = 0.0;
    double growth = 1.1;

    // Picard iteration for steps whose delayed argument lands inside the
    // current step (only near t = 0).
    int picard_max = 12;
    double picard_tol = 1e-13;

    double residual_tol = 1e-9;

    void validate() const; // throws ValidationError
};

// Forward solve of x'(t) = F(x(qt)) on [a, t_end] by the method of steps.
// Deterministic; segment boundaries aq^{-k} are exact knots.
Trajectory solve(const Problem& problem, double t_end, const SolveConfig& config = {});

} // namespace panto
