#pragma once

#include <vector>

#include "panto/stepper.hpp"
#include "panto/trajectory.hpp"

namespace panto {

enum class ExtremumKind { Minimum, Maximum };

struct Extremum {
    double t;
    double value;
    ExtremumKind kind;
};

struct TimeValue {
    double t;
    double value;
};

struct RegularityEntry {
    double breakpoint;       // a q^{-k}
    int continuous_derivatives;
    double measured_jump;    // jump of the first discontinuous derivative
};

struct AnalysisReport {
    std::vector<double> roots;
    std::vector<Extremum> extrema;
    std::vector<TimeValue> lyapunov_samples;
    std::vector<TimeValue> ratio_samples;
    std::vector<RegularityEntry> regularity;
    std::vector<double> extremum_magnitude_ratios; // |e_{i+1}| / |e_i|
};

// Sign-change scan over step knots, refined by bisection on the dense
// interpolant to 1e-12 time resolution.
std::vector<double> find_roots(const Trajectory& traj, double t_from, double t_to);

// 1/(lambda*(1-q)): guaranteed upper bound for the first root of
// x' = -lambda x(qt), x0 != 0.
double first_root_bound(double lambda_abs, double q);

// Zeros of x'(t) = F(x(qt)), classified by the sign change of x'.
std::vector<Extremum> local_extrema(const Trajectory& traj);

// (t, (1/t) log |x(t)|) pairs; samples at roots are skipped.
std::vector<TimeValue> lyapunov_curve(const Trajectory& traj,
                                      const std::vector<double>& sample_times);

// (t, x(t)/x(qt)) pairs; samples with x(qt) = 0 are skipped.
std::vector<TimeValue> ratio_curve(const Trajectory& traj,
                                   const std::vector<double>& sample_times);

// Continuous-derivative count l + 1 + floor((log t - log a)/log(1/q)) at a
// non-breakpoint time t.
int regularity_count(int l, double a, double q, double t);

// Jump of the order-th derivative across breakpoint b (order <= 3).
double derivative_jump(const Trajectory& traj, double b, int order);

// Solve x' = -lambda x(qt) and collect the raw oscillation evidence:
// roots, extrema, and consecutive-extremum magnitude ratios.
AnalysisReport oscillation_experiment(double lambda_abs, double q, double x0,
                                      double t_end, const SolveConfig& config = {});

} // namespace panto
