#pragma once

#include <string>
#include <vector>

#include "panto/trajectory.hpp"

namespace panto {

// Hermite-wrapped dense samples on [lo, hi]; the backward-extension result.
class DenseProfile {
public:
    DenseProfile(std::vector<Step> steps);

    double lo() const { return steps_.front().t_lo; }
    double hi() const { return steps_.back().t_hi; }
    double eval(double t) const;
    double deriv(double t) const;
    const std::vector<Step>& steps() const { return steps_; }

private:
    std::vector<Step> steps_;
};

// |eta'(a) - F(eta(qa))|. Throws if the profile carries no derivative.
double check_compatibility(const Problem& problem, double tol);

struct ReconstructOptions {
    double tol = 1e-8;            // junction-residual acceptance
    int samples_per_segment = 256; // 4x the default steps_per_segment
};

// Backward extension t -> F^{-1}(eta'(t/q)) on [q^2 a, qa].
DenseProfile reconstruct_one(const Problem& problem, const ReconstructOptions& opts = {});

struct LevelWarning {
    int level;
    double junction_residual;
    bool numerically_amplified;
    std::string message;
};

struct IteratedReconstruction {
    // Covers [q^{levels_completed+1} a, qa]; earlier segments first.
    std::vector<DenseProfile> segments;
    int levels_completed = 0;
    std::vector<LevelWarning> warnings;

    double eval(double t) const;
};

// Repeated backward extension; each level past the first differentiates the
// previous reconstruction numerically. Stops early (with a diagnostic) when
// a junction residual exceeds tol.
IteratedReconstruction reconstruct_iterated(const Problem& problem, int levels,
                                            const ReconstructOptions& opts = {});

// Restriction of a computed trajectory to [lo, hi], packaged as a Profile
// (with derivative) for use as initial data of a shifted problem.
Profile profile_from_trajectory(const Trajectory& traj, double lo, double hi);

} // namespace panto
