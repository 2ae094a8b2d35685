#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace panto {

// Coefficient function F of x'(t) = F(x(qt)), with optional inverse
// metadata needed by backward reconstruction.
class Field {
public:
    enum class Kind { Linear, Affine, Polynomial, Custom };

    using Fn = std::function<double(double)>;
    using Bracket = std::pair<double, double>;

    static Field linear(double lambda);
    static Field affine(double lambda, double offset);
    // F(x) = sum_i coeffs[i] * x^i
    static Field polynomial(std::vector<double> coeffs);
    static Field custom(Fn evaluate, std::optional<Fn> inverse = std::nullopt,
                        std::optional<Bracket> monotone_bracket = std::nullopt);

    double operator()(double x) const;

    Kind kind() const { return kind_; }
    bool has_inverse() const { return static_cast<bool>(inverse_); }
    bool has_bracket() const { return monotone_bracket_.has_value(); }
    const std::optional<Bracket>& monotone_bracket() const { return monotone_bracket_; }

    // Linear/affine accessors (valid only for those kinds).
    double lambda() const { return lambda_; }
    double offset() const { return offset_; }
    const std::vector<double>& coefficients() const { return coeffs_; }

    Field with_bracket(Bracket b) const;

    std::string describe() const;

    // Solves F(x) = y. Uses the declared inverse when present, otherwise
    // bisection on the monotone bracket (tolerance 1e-12 in x, 200 iterations).
    double invert(double y) const;

private:
    Field() = default;

    Kind kind_ = Kind::Custom;
    Fn evaluate_;
    std::optional<Fn> inverse_;
    std::optional<Bracket> monotone_bracket_;
    double lambda_ = 0.0;
    double offset_ = 0.0;
    std::vector<double> coeffs_;
};

inline double field_invert(const Field& field, double y) { return field.invert(y); }

} // namespace panto
