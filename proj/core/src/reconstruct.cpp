#include "panto/reconstruct.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <sstream>

#include "panto/errors.hpp"

namespace panto {

namespace {

// 4th-order central differences in the interior, one-sided 4-point stencils
// at the ends, uniform spacing h.
std::vector<double> sampled_derivative(const std::vector<double>& f, double h) {
    const int n = static_cast<int>(f.size());
    std::vector<double> d(n);
    for (int i = 0; i < n; ++i) {
        if (i >= 2 && i <= n - 3) {
            d[i] = (f[i - 2] - 8.0 * f[i - 1] + 8.0 * f[i + 1] - f[i + 2]) / (12.0 * h);
        } else if (i < 2) {
            d[i] = (-11.0 * f[i] + 18.0 * f[i + 1] - 9.0 * f[i + 2] + 2.0 * f[i + 3]) /
                   (6.0 * h);
        } else {
            d[i] = (11.0 * f[i] - 18.0 * f[i - 1] + 9.0 * f[i - 2] - 2.0 * f[i - 3]) /
                   (6.0 * h);
        }
    }
    return d;
}

const Profile& require_profile(const Problem& problem) {
    if (problem.is_degenerate())
        throw ValidationError("reconstruction needs a > 0 and an initial profile");
    return problem.profile();
}

} // namespace

DenseProfile::DenseProfile(std::vector<Step> steps) : steps_(std::move(steps)) {
    if (steps_.empty())
        throw ValidationError("dense profile needs at least one step");
}

double DenseProfile::eval(double t) const {
    const double slack = 1e-12 * std::max(1.0, std::abs(hi()));
    if (t < lo() - slack || t > hi() + slack) {
        std::ostringstream msg;
        msg << "time " << t << " outside reconstructed interval [" << lo()
            << ", " << hi() << "]";
        throw DomainError(msg.str(), lo(), hi());
    }
    t = std::clamp(t, lo(), hi());
    auto it = std::lower_bound(steps_.begin(), steps_.end(), t,
                               [](const Step& s, double v) { return s.t_hi < v; });
    return hermite_value(*it, t);
}

double DenseProfile::deriv(double t) const {
    t = std::clamp(t, lo(), hi());
    auto it = std::lower_bound(steps_.begin(), steps_.end(), t,
                               [](const Step& s, double v) { return s.t_hi < v; });
    if (t == it->t_lo) return it->d_lo;
    if (t == it->t_hi) return it->d_hi;
    return hermite_slope(*it, t);
}

double check_compatibility(const Problem& problem, double /*tol*/) {
    const Profile& p = require_profile(problem);
    if (!p.eta_deriv)
        throw ValidationError(
            "compatibility check needs a C1 profile with a derivative callable");
    const double a = problem.a();
    const double qa = problem.q() * a;
    return std::abs((*p.eta_deriv)(a) - problem.field()(p.eta(qa)));
}

DenseProfile reconstruct_one(const Problem& problem, const ReconstructOptions& opts) {
    const Profile& p = require_profile(problem);
    if (!p.eta_deriv)
        throw ValidationError("reconstruction needs a C1 profile with a derivative");
    const double residual = check_compatibility(problem, opts.tol);
    if (residual > opts.tol) {
        std::ostringstream msg;
        msg << "profile incompatible: |eta'(a) - F(eta(qa))| = " << residual
            << " exceeds tolerance " << opts.tol;
        throw CompatibilityError(msg.str(), residual);
    }

    const double q = problem.q();
    const double a = problem.a();
    const double lo = q * q * a;
    const double hi = q * a;
    const int n = std::max(8, opts.samples_per_segment);
    const double h = (hi - lo) / n;

    std::vector<double> ts(n + 1), xs(n + 1);
    for (int i = 0; i <= n; ++i) {
        ts[i] = (i == n) ? hi : lo + i * h;
        xs[i] = problem.field().invert((*p.eta_deriv)(ts[i] / q));
    }
    std::vector<double> ds = sampled_derivative(xs, h);

    std::vector<Step> steps(n);
    for (int i = 0; i < n; ++i)
        steps[i] = {ts[i], ts[i + 1], xs[i], xs[i + 1], ds[i], ds[i + 1]};
    return DenseProfile(std::move(steps));
}

double IteratedReconstruction::eval(double t) const {
    for (const DenseProfile& seg : segments)
        if (t <= seg.hi() * (1.0 + 1e-15))
            return seg.eval(t);
    return segments.back().eval(t);
}

IteratedReconstruction reconstruct_iterated(const Problem& problem, int levels,
                                            const ReconstructOptions& opts) {
    if (levels < 1)
        throw ValidationError("levels must be positive");

    IteratedReconstruction out;
    std::vector<DenseProfile> built; // latest first
    Problem current = problem;
    for (int level = 1; level <= levels; ++level) {
        double residual;
        try {
            residual = check_compatibility(current, opts.tol);
        } catch (const ValidationError&) {
            throw; // missing derivative is a hard error at level 1 only
        }
        if (residual > opts.tol) {
            std::ostringstream msg;
            msg << "stopped before level " << level << ": junction residual "
                << residual << " exceeds tolerance " << opts.tol;
            out.warnings.push_back({level, residual, level > 1, msg.str()});
            break;
        }
        DenseProfile seg = reconstruct_one(current, opts);
        std::ostringstream msg;
        msg << "level " << level << " junction residual at t = " << current.q() * current.a()
            << " is " << residual;
        if (level > 1)
            msg << " (numerically amplified: one extra numerical differentiation per level)";
        out.warnings.push_back({level, residual, level > 1, msg.str()});
        built.push_back(seg);
        out.levels_completed = level;

        if (level < levels) {
            auto shared = std::make_shared<DenseProfile>(std::move(seg));
            Profile next_profile{
                [shared](double t) { return shared->eval(t); },
                std::function<double(double)>([shared](double t) { return shared->deriv(t); }),
                std::max(0, problem.profile().smoothness - level)};
            current = Problem(current.q(), current.q() * current.a(),
                              current.field(), std::move(next_profile));
        }
    }
    if (out.levels_completed == 0)
        throw CompatibilityError(out.warnings.back().message,
                                 out.warnings.back().junction_residual);

    // Earliest segment first.
    out.segments.assign(built.rbegin(), built.rend());
    return out;
}

Profile profile_from_trajectory(const Trajectory& traj, double lo, double hi) {
    if (!(lo < hi))
        throw ValidationError("profile interval must satisfy lo < hi");
    if (lo < traj.eval_lo() || hi > traj.t_end())
        throw ValidationError("profile interval outside trajectory domain");
    auto shared = std::make_shared<Trajectory>(traj);
    return Profile{
        [shared](double t) { return shared->eval(t); },
        std::function<double(double)>(
            [shared](double t) { return shared->deriv(t, Side::Right); }),
        1};
}

} // namespace panto
