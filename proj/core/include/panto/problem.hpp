#pragma once

#include <functional>
#include <optional>
#include <variant>
#include <vector>

#include "panto/field.hpp"

namespace panto {

// Initial data: either a point value at a = 0 or a profile on [qa, a].
struct Degenerate {
    double x0 = 0.0;
};

struct Profile {
    std::function<double(double)> eta;
    std::optional<std::function<double(double)>> eta_deriv;
    int smoothness = 0; // declared continuity class l of eta
};

using InitialData = std::variant<Degenerate, Profile>;

// One pantograph equation instance: x'(t) = F(x(qt)) with history on [qa, a]
// (or x(0) = x0 when a = 0).
class Problem {
public:
    Problem(double q, double a, Field field, InitialData initial);

    double q() const { return q_; }
    double a() const { return a_; }
    const Field& field() const { return field_; }
    const InitialData& initial() const { return initial_; }

    bool is_degenerate() const { return std::holds_alternative<Degenerate>(initial_); }
    const Degenerate& degenerate() const { return std::get<Degenerate>(initial_); }
    const Profile& profile() const { return std::get<Profile>(initial_); }

    // eta(t) for profile problems; x0 for degenerate ones (t must be 0).
    double initial_value(double t) const;

private:
    double q_;
    double a_;
    Field field_;
    InitialData initial_;
};

// The ladder {a q^{-k}} intersected with [qa, t_max], ascending.
// Empty for a = 0.
std::vector<double> breakpoints(const Problem& problem, double t_max);

} // namespace panto
