#include "panto/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "panto/errors.hpp"

namespace panto {

double hermite_value(const Step& s, double t) {
    const double h = s.t_hi - s.t_lo;
    if (t == s.t_lo) return s.x_lo;
    if (t == s.t_hi) return s.x_hi;
    const double u = (t - s.t_lo) / h;
    const double u2 = u * u;
    const double u3 = u2 * u;
    const double h00 = 2 * u3 - 3 * u2 + 1;
    const double h10 = u3 - 2 * u2 + u;
    const double h01 = -2 * u3 + 3 * u2;
    const double h11 = u3 - u2;
    return h00 * s.x_lo + h10 * h * s.d_lo + h01 * s.x_hi + h11 * h * s.d_hi;
}

double hermite_slope(const Step& s, double t) {
    const double h = s.t_hi - s.t_lo;
    const double u = (t - s.t_lo) / h;
    const double u2 = u * u;
    const double g00 = (6 * u2 - 6 * u) / h;
    const double g10 = 3 * u2 - 4 * u + 1;
    const double g01 = (-6 * u2 + 6 * u) / h;
    const double g11 = 3 * u2 - 2 * u;
    return g00 * s.x_lo + g10 * s.d_lo + g01 * s.x_hi + g11 * s.d_hi;
}

Trajectory::Trajectory(Problem problem, double t_start, double t_end,
                       std::vector<double> knots, std::vector<Step> steps)
    : problem_(std::move(problem)), t_start_(t_start), t_end_(t_end),
      knots_(std::move(knots)), steps_(std::move(steps)) {
    if (steps_.empty())
        throw ValidationError("trajectory needs at least one step");
}

double Trajectory::eval_lo() const {
    return problem_.is_degenerate() ? t_start_ : problem_.q() * t_start_;
}

const Step& Trajectory::step_containing(double t) const {
    // First step with t_hi >= t.
    auto it = std::lower_bound(steps_.begin(), steps_.end(), t,
                               [](const Step& s, double v) { return s.t_hi < v; });
    if (it == steps_.end())
        --it;
    return *it;
}

double Trajectory::eval(double t) const {
    const double lo = eval_lo();
    const double slack = 1e-12 * std::max(1.0, std::abs(t_end_));
    if (t < lo - slack || t > t_end_ + slack) {
        std::ostringstream msg;
        msg << "time " << t << " outside computed domain [" << lo << ", "
            << t_end_ << "]";
        throw DomainError(msg.str(), lo, t_end_);
    }
    t = std::clamp(t, lo, t_end_);
    if (!problem_.is_degenerate() && t <= t_start_) {
        // Profile problems: t_start itself belongs to eta's closure; the
        // stored steps start at t_start with the same value.
        if (t < t_start_)
            return problem_.initial_value(t);
    }
    return hermite_value(step_containing(t), t);
}

double Trajectory::deriv(double t, Side side) const {
    const double lo = eval_lo();
    if (side == Side::Right) {
        // From the equation: x'(t+) = F(x(qt)).
        if (t >= t_start_)
            return problem_.field()(eval(problem_.q() * t));
        // Inside the profile interval.
        const Profile& p = problem_.profile();
        if (p.eta_deriv)
            return (*p.eta_deriv)(t);
        throw ValidationError("profile has no derivative callable");
    }
    // Left derivative.
    if (!problem_.is_degenerate() && t <= t_start_) {
        const Profile& p = problem_.profile();
        if (p.eta_deriv)
            return (*p.eta_deriv)(t);
        throw ValidationError("profile has no derivative callable");
    }
    if (t <= t_start_) {
        std::ostringstream msg;
        msg << "no left derivative at domain start " << t_start_;
        throw DomainError(msg.str(), lo, t_end_);
    }
    // First derivatives are continuous strictly right of t_start, so the
    // stored slope at a knot is also the left limit.
    auto it = std::lower_bound(steps_.begin(), steps_.end(), t,
                               [](const Step& s, double v) { return s.t_hi < v; });
    if (it == steps_.end())
        --it;
    if (t == it->t_hi)
        return it->d_hi;
    if (t == it->t_lo)
        return it->d_lo;
    return hermite_slope(*it, t);
}

} // namespace panto
