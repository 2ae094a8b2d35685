#include "panto/linear.hpp"

#include <cmath>

#include "panto/errors.hpp"

namespace panto {

namespace {
constexpr int kMaxTerms = 500; // safety valve; unreachable for |lambda*t| < 1e6
}

double phi_taylor_coefficient(double lambda, double q, int n) {
    if (n < 0)
        throw ValidationError("derivative order must be nonnegative");
    return std::pow(lambda, n) * std::pow(q, 0.5 * n * (n - 1));
}

double phi_series(double lambda, double q, double t, double tol) {
    if (!(q > 0.0 && q < 1.0))
        throw ValidationError("q must lie strictly in (0, 1)");
    if (!(tol > 0.0))
        throw ValidationError("series tolerance must be positive");

    double sum = 1.0;
    double term = 1.0;
    double qpow = 1.0; // q^n
    int small_in_a_row = 0;
    for (int n = 0; n < kMaxTerms; ++n) {
        term *= qpow * lambda * t / (n + 1);
        sum += term;
        qpow *= q;
        if (std::abs(term) <= tol * std::max(1.0, std::abs(sum))) {
            if (++small_in_a_row == 2)
                break;
        } else {
            small_in_a_row = 0;
        }
    }
    return sum;
}

double linear_solution(const LinearProblem& lp, double t, double tol) {
    return lp.x0 * phi_series(lp.lambda, lp.q, t, tol);
}

} // namespace panto
