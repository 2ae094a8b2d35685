#include "panto/stepper.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>

#include "panto/errors.hpp"

namespace panto {

namespace {

constexpr double kOverflowLimit = 1e300;
constexpr double kMinStep = 1e-12;

class Builder {
public:
    Builder(const Problem& problem, double t_end)
        : problem_(problem), t_end_(t_end) {}

    // x at time t, drawing on finalized steps, the provisional step, or the
    // initial data. Every delayed lookup of the integrator goes through here.
    double value_at(double t) const {
        const double a = problem_.a();
        if (!problem_.is_degenerate() && t < a)
            return problem_.initial_value(t);
        if (steps_.empty() && !provisional_) {
            // Only the seed value is known.
            return problem_.is_degenerate() ? problem_.degenerate().x0
                                            : problem_.initial_value(a);
        }
        const double t_cover =
            provisional_ ? provisional_->t_hi : steps_.back().t_hi;
        const double t_floor = steps_.empty() ? provisional_->t_lo : steps_.front().t_lo;
        const double slack = 1e-12 * std::max(1.0, std::abs(t_cover));
        if (t > t_cover + slack) {
            std::ostringstream msg;
            msg << "delayed lookup at t = " << t << " precedes available data";
            throw ValidationError(msg.str());
        }
        t = std::clamp(t, t_floor, t_cover);
        if (provisional_ && (steps_.empty() || t > provisional_->t_lo))
            return hermite_value(*provisional_, t);
        auto it = std::lower_bound(
            steps_.begin(), steps_.end(), t,
            [](const Step& s, double v) { return s.t_hi < v; });
        return hermite_value(*it, t);
    }

    // F(x(q s)) — the right-hand side as a known function of time.
    double rhs(double s) const {
        try {
            return problem_.field()(value_at(problem_.q() * s));
        } catch (const OverflowError&) {
            std::ostringstream msg;
            msg << "field value non-finite at t = " << s;
            throw OverflowError(msg.str(), s);
        }
    }

    void check_overflow(double x, double t) const {
        if (!std::isfinite(x) || std::abs(x) > kOverflowLimit) {
            std::ostringstream msg;
            msg << "solution magnitude exceeded " << kOverflowLimit
                << " at t = " << t;
            throw OverflowError(msg.str(), t);
        }
    }

    // One step of Simpson quadrature on the known RHS; valid only when no
    // stage reads inside [t, t+h].
    void push_plain_step(double t, double h, double x, double d_lo) {
        const double gm = rhs(t + 0.5 * h);
        const double ge = rhs(t + h);
        const double x_hi = x + h / 6.0 * (d_lo + 4.0 * gm + ge);
        check_overflow(x_hi, t + h);
        steps_.push_back({t, t + h, x, x_hi, d_lo, ge});
    }

    // Picard sweep for steps whose delayed argument lands inside the step
    // itself (degenerate bootstrap near t = 0).
    bool push_picard_step(double t, double h, double x, double d_lo,
                          const SolveConfig& cfg) {
        provisional_ = Step{t, t + h, x, x + h * d_lo, d_lo, d_lo};
        double x_prev = provisional_->x_hi;
        for (int sweep = 0; sweep < cfg.picard_max; ++sweep) {
            const double gm = rhs(t + 0.5 * h);
            const double ge = rhs(t + h);
            const double x_hi = x + h / 6.0 * (d_lo + 4.0 * gm + ge);
            check_overflow(x_hi, t + h);
            provisional_->x_hi = x_hi;
            provisional_->d_hi = rhs(t + h);
            if (sweep > 0 &&
                std::abs(x_hi - x_prev) <= cfg.picard_tol * std::max(1.0, std::abs(x_hi))) {
                steps_.push_back(*provisional_);
                provisional_.reset();
                return true;
            }
            x_prev = x_hi;
        }
        provisional_.reset();
        return false;
    }

    std::vector<Step> take_steps() { return std::move(steps_); }
    bool empty() const { return steps_.empty(); }
    const Step& back() const { return steps_.back(); }

private:
    const Problem& problem_;
    double t_end_;
    std::vector<Step> steps_;
    std::optional<Step> provisional_;
};

void solve_segmented(Builder& b, const Problem& problem, double t_end,
                     const SolveConfig& cfg) {
    const double a = problem.a();
    const double q = problem.q();
    double seg_lo = a;
    double x = problem.initial_value(a);
    while (seg_lo < t_end) {
        const double seg_hi = std::min(seg_lo / q, t_end);
        const int n = cfg.steps_per_segment;
        for (int i = 0; i < n; ++i) {
            // Endpoints from the exact ladder so breakpoints are exact knots.
            const double t0 = seg_lo + (seg_hi - seg_lo) * i / n;
            const double t1 = (i == n - 1) ? seg_hi
                                           : seg_lo + (seg_hi - seg_lo) * (i + 1) / n;
            const double d_lo = b.rhs(t0);
            b.push_plain_step(t0, t1 - t0, x, d_lo);
            x = b.back().x_hi;
        }
        seg_lo = seg_hi;
    }
}

void solve_degenerate(Builder& b, const Problem& problem, double t_end,
                      const SolveConfig& cfg) {
    const double q = problem.q();
    const double h_max = 1.0 / cfg.steps_per_segment;
    const double h_seed = cfg.h0 > 0.0 ? cfg.h0 : 1e-3 * std::max(1.0, t_end);
    double h = std::min(h_seed, h_max);
    double t = 0.0;
    double x = problem.degenerate().x0;
    while (t < t_end) {
        h = std::min(h, t_end - t);
        const double d_lo = b.rhs(t);
        if (q * (t + h) <= t * (1.0 + 1e-15)) {
            b.push_plain_step(t, h, x, d_lo);
        } else {
            // Delayed argument reads inside the current step: Picard, with
            // step halving on non-convergence.
            double h_try = h;
            while (!b.push_picard_step(t, h_try, x, d_lo, cfg)) {
                h_try *= 0.5;
                if (h_try < kMinStep)
                    throw ConvergenceError(
                        "Picard bootstrap failed to converge above the minimum step");
            }
        }
        t = b.back().t_hi;
        x = b.back().x_hi;
        h = std::min(b.back().t_hi - b.back().t_lo, h) * cfg.growth;
        h = std::min(h, h_max);
    }
}

} // namespace

void SolveConfig::validate() const {
    if (steps_per_segment < 4)
        throw ValidationError("steps_per_segment must be at least 4");
    if (h0 < 0.0)
        throw ValidationError("h0 must be nonnegative");
    if (growth <= 1.0)
        throw ValidationError("growth factor must exceed 1");
    if (picard_max < 1)
        throw ValidationError("picard_max must be positive");
    if (picard_tol <= 0.0 || residual_tol <= 0.0)
        throw ValidationError("tolerances must be positive");
}

Trajectory solve(const Problem& problem, double t_end, const SolveConfig& config) {
    config.validate();
    if (!(t_end > problem.a()))
        throw ValidationError("t_end must exceed the base point a");

    Builder b(problem, t_end);
    if (problem.is_degenerate())
        solve_degenerate(b, problem, t_end, config);
    else
        solve_segmented(b, problem, t_end, config);

    auto steps = b.take_steps();
    std::vector<double> knots;
    knots.reserve(steps.size() + 1);
    knots.push_back(steps.front().t_lo);
    for (const Step& s : steps)
        knots.push_back(s.t_hi);
    return Trajectory(problem, problem.a(), t_end, std::move(knots), std::move(steps));
}

} // namespace panto
