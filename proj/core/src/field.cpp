#include "panto/field.hpp"

#include <cmath>
#include <sstream>

#include "panto/errors.hpp"

namespace panto {

namespace {

constexpr double kInvertTolX = 1e-12;
constexpr int kInvertMaxIter = 200;

double eval_poly(const std::vector<double>& c, double x) {
    double acc = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it)
        acc = acc * x + *it;
    return acc;
}

} // namespace

Field Field::linear(double lambda) {
    Field f;
    f.kind_ = Kind::Linear;
    f.lambda_ = lambda;
    f.coeffs_ = {0.0, lambda};
    f.evaluate_ = [lambda](double x) { return lambda * x; };
    if (lambda != 0.0)
        f.inverse_ = [lambda](double y) { return y / lambda; };
    return f;
}

Field Field::affine(double lambda, double offset) {
    Field f;
    f.kind_ = Kind::Affine;
    f.lambda_ = lambda;
    f.offset_ = offset;
    f.coeffs_ = {offset, lambda};
    f.evaluate_ = [lambda, offset](double x) { return lambda * x + offset; };
    if (lambda != 0.0)
        f.inverse_ = [lambda, offset](double y) { return (y - offset) / lambda; };
    return f;
}

Field Field::polynomial(std::vector<double> coeffs) {
    if (coeffs.empty())
        throw ValidationError("polynomial field needs at least one coefficient");
    Field f;
    f.kind_ = Kind::Polynomial;
    f.coeffs_ = coeffs;
    f.evaluate_ = [c = std::move(coeffs)](double x) { return eval_poly(c, x); };
    return f;
}

Field Field::custom(Fn evaluate, std::optional<Fn> inverse,
                    std::optional<Bracket> monotone_bracket) {
    if (!evaluate)
        throw ValidationError("custom field needs an evaluate callable");
    Field f;
    f.kind_ = Kind::Custom;
    f.evaluate_ = std::move(evaluate);
    f.inverse_ = std::move(inverse);
    f.monotone_bracket_ = monotone_bracket;
    return f;
}

double Field::operator()(double x) const {
    double y = evaluate_(x);
    if (!std::isfinite(y)) {
        std::ostringstream msg;
        msg << "field produced non-finite value at x = " << x;
        throw OverflowError(msg.str(), x);
    }
    return y;
}

Field Field::with_bracket(Bracket b) const {
    if (b.first >= b.second)
        throw ValidationError("monotone bracket must satisfy lo < hi");
    Field f = *this;
    f.monotone_bracket_ = b;
    return f;
}

std::string Field::describe() const {
    std::ostringstream os;
    switch (kind_) {
    case Kind::Linear: os << "linear:" << lambda_; break;
    case Kind::Affine: os << "affine:" << lambda_ << "," << offset_; break;
    case Kind::Polynomial:
        os << "poly:";
        for (size_t i = 0; i < coeffs_.size(); ++i)
            os << (i ? "," : "") << coeffs_[i];
        break;
    case Kind::Custom: os << "custom"; break;
    }
    return os.str();
}

double Field::invert(double y) const {
    if (inverse_) {
        double x = (*inverse_)(y);
        if (!std::isfinite(x))
            throw NotInvertibleError("declared inverse returned non-finite value");
        return x;
    }
    if (!monotone_bracket_)
        throw NotInvertibleError(
            "field has no declared inverse and no monotone bracket");

    auto [lo, hi] = *monotone_bracket_;
    double flo = evaluate_(lo);
    double fhi = evaluate_(hi);
    bool increasing = flo <= fhi;
    if (!increasing) {
        std::swap(flo, fhi);
    }
    if (y < flo || y > fhi) {
        std::ostringstream msg;
        msg << "value " << y << " outside field image [" << flo << ", " << fhi
            << "] on the monotone bracket";
        throw NotInvertibleError(msg.str());
    }
    for (int i = 0; i < kInvertMaxIter && hi - lo > kInvertTolX; ++i) {
        double mid = 0.5 * (lo + hi);
        double fm = evaluate_(mid);
        if ((fm < y) == increasing)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace panto
