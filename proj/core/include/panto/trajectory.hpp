#pragma once

#include <vector>

#include "panto/problem.hpp"

namespace panto {

// One dense-output record: cubic Hermite on [t_lo, t_hi] with endpoint
// values and equation-derived endpoint slopes d = F(x(qt)).
struct Step {
    double t_lo, t_hi;
    double x_lo, x_hi;
    double d_lo, d_hi;
};

// Cubic Hermite evaluation on one step.
double hermite_value(const Step& s, double t);
double hermite_slope(const Step& s, double t);

enum class Side { Left, Right };

// Piecewise dense solution on [t_start, t_end]; for profile problems the
// evaluable domain extends down to q*t_start via eta.
class Trajectory {
public:
    Trajectory(Problem problem, double t_start, double t_end,
               std::vector<double> knots, std::vector<Step> steps);

    const Problem& problem() const { return problem_; }
    double t_start() const { return t_start_; }
    double t_end() const { return t_end_; }
    const std::vector<double>& knots() const { return knots_; }
    const std::vector<Step>& steps() const { return steps_; }

    // x(t). Cubic Hermite on the containing step, exact at step endpoints;
    // t in the initial-profile domain returns eta(t).
    double eval(double t) const;

    // One-sided derivative. The right derivative is recomputed from the
    // equation as F(eval(qt)); the left side comes from eta' on the profile
    // interval and from the stored slope elsewhere.
    double deriv(double t, Side side) const;

    double eval_lo() const; // lower end of the evaluable domain

private:
    const Step& step_containing(double t) const;

    Problem problem_;
    double t_start_, t_end_;
    std::vector<double> knots_;
    std::vector<Step> steps_;
};

inline double trajectory_eval(const Trajectory& traj, double t) { return traj.eval(t); }
inline double trajectory_deriv(const Trajectory& traj, double t, Side side) {
    return traj.deriv(t, side);
}

} // namespace panto
