#include "panto/problem.hpp"

#include <cmath>
#include <sstream>

#include "panto/errors.hpp"

namespace panto {

Problem::Problem(double q, double a, Field field, InitialData initial)
    : q_(q), a_(a), field_(std::move(field)), initial_(std::move(initial)) {
    if (!(q > 0.0 && q < 1.0))
        throw ValidationError("delay ratio q must lie strictly in (0, 1)");
    if (!(a >= 0.0))
        throw ValidationError("base point a must be nonnegative");
    if (a == 0.0) {
        if (!std::holds_alternative<Degenerate>(initial_))
            throw ValidationError("a = 0 requires a degenerate initial condition");
    } else {
        if (!std::holds_alternative<Profile>(initial_))
            throw ValidationError("a > 0 requires an initial profile on [qa, a]");
        if (!profile().eta)
            throw ValidationError("initial profile needs an eta callable");
    }
}

double Problem::initial_value(double t) const {
    if (is_degenerate())
        return degenerate().x0;
    double v = profile().eta(t);
    if (!std::isfinite(v)) {
        std::ostringstream msg;
        msg << "initial profile non-finite at t = " << t;
        throw ValidationError(msg.str());
    }
    return v;
}

std::vector<double> breakpoints(const Problem& problem, double t_max) {
    std::vector<double> out;
    const double a = problem.a();
    if (a == 0.0)
        return out;
    const double q = problem.q();
    // k = -1, 0, 1, ... gives a*q, a, a/q, ...
    for (double b = a * q; b <= t_max * (1.0 + 1e-15); b /= q)
        out.push_back(b);
    return out;
}

} // namespace panto
