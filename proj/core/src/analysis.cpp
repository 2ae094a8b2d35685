#include "panto/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "panto/errors.hpp"

namespace panto {

namespace {

constexpr double kRootTimeResolution = 1e-12;

// Bisection refinement of a sign change of f on [lo, hi].
template <typename F>
double bisect(F&& f, double lo, double hi, double flo) {
    while (hi - lo > kRootTimeResolution) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if (fm == 0.0)
            return mid;
        if ((fm < 0.0) == (flo < 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

void check_window(const Trajectory& traj, double t_from, double t_to) {
    if (t_from < traj.eval_lo() - 1e-12 || t_to > traj.t_end() + 1e-12 ||
        t_from > t_to) {
        std::ostringstream msg;
        msg << "window [" << t_from << ", " << t_to << "] outside trajectory domain";
        throw DomainError(msg.str(), traj.eval_lo(), traj.t_end());
    }
}

} // namespace

std::vector<double> find_roots(const Trajectory& traj, double t_from, double t_to) {
    check_window(traj, t_from, t_to);
    std::vector<double> roots;
    double prev_t = t_from;
    double prev_x = traj.eval(t_from);
    for (const Step& s : traj.steps()) {
        if (s.t_hi <= t_from || s.t_lo >= t_to)
            continue;
        const double t = std::min(s.t_hi, t_to);
        const double x = traj.eval(t);
        if (x == 0.0 && prev_x != 0.0) {
            // Exact zero at a knot; the identically zero solution is not a
            // sign change and is excluded.
            roots.push_back(t);
        } else if (x != 0.0 && prev_x != 0.0 && (x < 0.0) != (prev_x < 0.0)) {
            roots.push_back(bisect([&](double u) { return traj.eval(u); },
                                   prev_t, t, prev_x));
        }
        prev_t = t;
        prev_x = x;
    }
    return roots;
}

double first_root_bound(double lambda_abs, double q) {
    if (!(lambda_abs > 0.0))
        throw ValidationError("lambda magnitude must be positive");
    if (!(q > 0.0 && q < 1.0))
        throw ValidationError("q must lie strictly in (0, 1)");
    return 1.0 / (lambda_abs * (1.0 - q));
}

std::vector<Extremum> local_extrema(const Trajectory& traj) {
    // x'(t) = F(x(qt)), evaluated through the dense output.
    auto slope = [&](double t) {
        return traj.problem().field()(traj.eval(traj.problem().q() * t));
    };
    std::vector<Extremum> out;
    double prev_t = traj.t_start();
    double prev_d = slope(prev_t);
    for (const Step& s : traj.steps()) {
        const double t = s.t_hi;
        const double d = slope(t);
        if (prev_d != 0.0 && d != 0.0 && (d < 0.0) != (prev_d < 0.0)) {
            const double te = bisect(slope, prev_t, t, prev_d);
            out.push_back({te, traj.eval(te),
                           prev_d < 0.0 ? ExtremumKind::Minimum : ExtremumKind::Maximum});
        }
        prev_t = t;
        prev_d = d;
    }
    return out;
}

std::vector<TimeValue> lyapunov_curve(const Trajectory& traj,
                                      const std::vector<double>& sample_times) {
    std::vector<TimeValue> out;
    for (double t : sample_times) {
        if (!(t > 0.0))
            throw ValidationError("Lyapunov samples must have t > 0");
        const double x = traj.eval(t);
        if (x == 0.0)
            continue; // root: log of zero, skipped
        out.push_back({t, std::log(std::abs(x)) / t});
    }
    return out;
}

std::vector<TimeValue> ratio_curve(const Trajectory& traj,
                                   const std::vector<double>& sample_times) {
    std::vector<TimeValue> out;
    const double q = traj.problem().q();
    for (double t : sample_times) {
        const double denom = traj.eval(q * t);
        if (denom == 0.0)
            continue;
        out.push_back({t, traj.eval(t) / denom});
    }
    return out;
}

int regularity_count(int l, double a, double q, double t) {
    if (l < 0)
        throw ValidationError("profile smoothness l must be nonnegative");
    if (!(a > 0.0))
        throw ValidationError("regularity ladder needs a > 0");
    if (!(q > 0.0 && q < 1.0))
        throw ValidationError("q must lie strictly in (0, 1)");
    if (!(t > a * q))
        throw ValidationError("t must lie inside the solution domain (t > qa)");
    const double k = (std::log(t) - std::log(a)) / std::log(1.0 / q);
    const double k_round = std::round(k);
    if (std::abs(k - k_round) <= 1e-12 * std::max(1.0, std::abs(k))) {
        std::ostringstream msg;
        msg << "t = " << t << " is the breakpoint a*q^" << -k_round
            << ", where the derivative count jumps";
        throw BreakpointError(msg.str());
    }
    return l + 1 + static_cast<int>(std::floor(k));
}

double derivative_jump(const Trajectory& traj, double b, int order) {
    if (order < 1)
        throw ValidationError("derivative order must be positive");
    if (order > 3)
        throw UnsupportedOrderError(
            "orders above 3 drown in interpolation noise; use the regularity "
            "ladder formula instead");

    // b must be a knot.
    const auto& knots = traj.knots();
    auto it = std::lower_bound(knots.begin(), knots.end(), b - 1e-9);
    if (it == knots.end() || std::abs(*it - b) > 1e-9 * std::max(1.0, std::abs(b)))
        throw ValidationError("jump estimation requires a trajectory knot");

    if (order == 1)
        return traj.deriv(b, Side::Right) - traj.deriv(b, Side::Left);

    // One-sided stencils on each side, spacing delta = adjacent step / 8.
    const auto& steps = traj.steps();
    auto right_step = std::lower_bound(
        steps.begin(), steps.end(), b + 1e-12,
        [](const Step& s, double v) { return s.t_hi < v; });
    if (right_step == steps.end())
        throw DomainError("no data right of the breakpoint", traj.eval_lo(),
                          traj.t_end());
    const double dr = (right_step->t_hi - right_step->t_lo) / 8.0;
    const double dl = dr; // profile side is analytic; symmetric spacing is fine

    auto f = [&](double t) { return traj.eval(t); };
    double fr[5], fl[5];
    for (int i = 0; i < 5; ++i) {
        fr[i] = f(b + i * dr);
        fl[i] = f(b - i * dl);
    }
    if (order == 2) {
        const double right =
            (35 * fr[0] - 104 * fr[1] + 114 * fr[2] - 56 * fr[3] + 11 * fr[4]) /
            (12 * dr * dr);
        const double left =
            (35 * fl[0] - 104 * fl[1] + 114 * fl[2] - 56 * fl[3] + 11 * fl[4]) /
            (12 * dl * dl);
        return right - left;
    }
    const double right =
        (-5 * fr[0] + 18 * fr[1] - 24 * fr[2] + 14 * fr[3] - 3 * fr[4]) /
        (2 * dr * dr * dr);
    const double left =
        -(-5 * fl[0] + 18 * fl[1] - 24 * fl[2] + 14 * fl[3] - 3 * fl[4]) /
        (2 * dl * dl * dl);
    return right - left;
}

AnalysisReport oscillation_experiment(double lambda_abs, double q, double x0,
                                      double t_end, const SolveConfig& config) {
    if (!(lambda_abs > 0.0))
        throw ValidationError("lambda magnitude must be positive");
    Problem problem(q, 0.0, Field::linear(-lambda_abs), Degenerate{x0});
    Trajectory traj = solve(problem, t_end, config);

    AnalysisReport report;
    report.roots = find_roots(traj, 0.0, t_end);
    report.extrema = local_extrema(traj);
    for (size_t i = 0; i + 1 < report.extrema.size(); ++i) {
        const double lo = std::abs(report.extrema[i].value);
        if (lo > 0.0)
            report.extremum_magnitude_ratios.push_back(
                std::abs(report.extrema[i + 1].value) / lo);
    }
    return report;
}

} // namespace panto
