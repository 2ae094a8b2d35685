#include <doctest.h>

#include <cmath>
#include <memory>

#include "panto/errors.hpp"
#include "panto/reconstruct.hpp"
#include "panto/stepper.hpp"

using namespace panto;

namespace {

Problem linear_ramp_problem() {
    // eta(t) = t on [1, 2], F identity, q = 0.5, a = 2.
    return Problem(0.5, 2.0, Field::linear(1.0),
                   Profile{[](double t) { return t; },
                           std::function<double(double)>([](double) { return 1.0; }),
                           1});
}

Problem flat_incompatible_problem() {
    // eta = 1 on [0.5, 1], F identity: eta'(1) = 0 but F(eta(0.5)) = 1.
    return Problem(0.5, 1.0, Field::linear(1.0),
                   Profile{[](double) { return 1.0; },
                           std::function<double(double)>([](double) { return 0.0; }),
                           0});
}

} // namespace

TEST_CASE("check_compatibility examples") {
    CHECK(check_compatibility(linear_ramp_problem(), 1e-8) ==
          doctest::Approx(0.0).epsilon(1e-15));
    CHECK(check_compatibility(flat_incompatible_problem(), 1e-8) ==
          doctest::Approx(1.0));
}

TEST_CASE("check_compatibility requires a profile derivative") {
    Problem p(0.5, 1.0, Field::linear(1.0),
              Profile{[](double) { return 1.0; }, std::nullopt, 0});
    CHECK_THROWS_AS(check_compatibility(p, 1e-8), ValidationError);
    Problem degenerate(0.5, 0.0, Field::linear(1.0), Degenerate{1.0});
    CHECK_THROWS_AS(check_compatibility(degenerate, 1e-8), ValidationError);
}

TEST_CASE("reconstruct_one: constant extension of the linear ramp") {
    // F^{-1}(eta'(t/q)) = 1 identically on [0.5, 1].
    DenseProfile seg = reconstruct_one(linear_ramp_problem());
    CHECK(seg.lo() == doctest::Approx(0.5));
    CHECK(seg.hi() == doctest::Approx(1.0));
    for (double t = 0.5; t <= 1.0; t += 0.05)
        CHECK(seg.eval(t) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("reconstruct_one: linear field divides by lambda") {
    // eta(t) = t^2 on [1.5, 3], F(x) = 2x: reconstruction = eta'(t/q)/2 = 2t.
    Problem p(0.5, 3.0, Field::linear(2.0),
              Profile{[](double t) { return t * t; },
                      std::function<double(double)>([](double t) { return 2.0 * t; }),
                      2});
    // Compatibility: eta'(3) = 6 = F(eta(1.5)) = 2*2.25 = 4.5 -> incompatible.
    CHECK_THROWS_AS(reconstruct_one(p), CompatibilityError);

    ReconstructOptions loose;
    loose.tol = 2.0;
    DenseProfile seg = reconstruct_one(p, loose);
    for (double t = 0.8; t <= 1.5; t += 0.1)
        CHECK(seg.eval(t) == doctest::Approx(2.0 * t).epsilon(1e-10));
}

TEST_CASE("reconstruct_one refuses non-invertible fields") {
    Problem p(0.5, 2.0, Field::linear(0.0),
              Profile{[](double) { return 0.0; },
                      std::function<double(double)>([](double) { return 0.0; }),
                      0});
    CHECK_THROWS_AS(reconstruct_one(p), NotInvertibleError);
}

TEST_CASE("round-trip: forward solve, restrict, reconstruct") {
    Problem fwd(0.5, 0.0, Field::linear(1.0), Degenerate{1.0});
    Trajectory traj = solve(fwd, 2.0);
    Problem back(0.5, 2.0, Field::linear(1.0), profile_from_trajectory(traj, 1.0, 2.0));

    CHECK(check_compatibility(back, 1e-7) < 1e-7);

    DenseProfile seg = reconstruct_one(back);
    double worst = 0.0;
    for (double t = 0.5; t <= 1.0; t += 0.01)
        worst = std::max(worst, std::abs(seg.eval(t) - traj.eval(t)));
    CHECK(worst < 1e-6);
}

TEST_CASE("reconstruct_iterated level 1 equals reconstruct_one") {
    auto one = reconstruct_one(linear_ramp_problem());
    auto iter = reconstruct_iterated(linear_ramp_problem(), 1);
    CHECK(iter.levels_completed == 1);
    REQUIRE(iter.segments.size() == 1);
    for (double t = 0.5; t <= 1.0; t += 0.05)
        CHECK(iter.segments[0].eval(t) == one.eval(t));
}

TEST_CASE("reconstruct_iterated two levels against the forward solution") {
    Problem fwd(0.5, 0.0, Field::linear(1.0), Degenerate{1.0});
    Trajectory traj = solve(fwd, 2.0);
    Problem back(0.5, 2.0, Field::linear(1.0), profile_from_trajectory(traj, 1.0, 2.0));

    auto iter = reconstruct_iterated(back, 2);
    CHECK(iter.levels_completed == 2);
    CHECK(iter.warnings.size() == 2);
    CHECK(iter.warnings[1].numerically_amplified);
    double worst = 0.0;
    for (double t = 0.25; t <= 0.5; t += 0.005)
        worst = std::max(worst, std::abs(iter.eval(t) - traj.eval(t)));
    CHECK(worst < 1e-4);
}

TEST_CASE("reconstruct_iterated stops at an incompatible junction") {
    // eta(t) = 2t - 1 on [0.5, 1], F identity: eta'(1) = 2 but F(eta(0.5)) = 0,
    // incompatible already at level 1.
    Problem p(0.5, 1.0, Field::linear(1.0),
              Profile{[](double t) { return 2.0 * t - 1.0; },
                      std::function<double(double)>([](double) { return 2.0; }),
                      1});
    CHECK_THROWS_AS(reconstruct_iterated(p, 2), CompatibilityError);

    // The ramp is compatible at level 1 but its constant extension breaks the
    // next junction (slope 0 vs F(1) = 1), so iteration stops early.
    auto iter = reconstruct_iterated(linear_ramp_problem(), 3);
    CHECK(iter.levels_completed >= 1);
    CHECK(iter.levels_completed < 3);
    CHECK_FALSE(iter.warnings.empty());
    CHECK(iter.warnings.back().junction_residual > 1e-8);
}

TEST_CASE("junction continuity when compatibility holds") {
    Problem fwd(0.5, 0.0, Field::linear(1.0), Degenerate{1.0});
    Trajectory traj = solve(fwd, 2.0);
    Problem back(0.5, 2.0, Field::linear(1.0), profile_from_trajectory(traj, 1.0, 2.0));
    DenseProfile seg = reconstruct_one(back);
    CHECK(seg.eval(1.0) == doctest::Approx(traj.eval(1.0)).epsilon(1e-8));
}

TEST_CASE("re-solving forward from the reconstruction reproduces eta") {
    Problem fwd(0.5, 0.0, Field::linear(1.0), Degenerate{1.0});
    Trajectory traj = solve(fwd, 2.0);
    Problem back(0.5, 2.0, Field::linear(1.0), profile_from_trajectory(traj, 1.0, 2.0));
    auto seg = std::make_shared<DenseProfile>(reconstruct_one(back));

    // New problem with base point a = 1 and the reconstruction as profile.
    Problem shifted(0.5, 1.0, Field::linear(1.0),
                    Profile{[seg](double t) { return seg->eval(t); },
                            std::function<double(double)>(
                                [seg](double t) { return seg->deriv(t); }),
                            1});
    Trajectory resolved = solve(shifted, 2.0);
    double worst = 0.0;
    for (double t = 1.0; t <= 2.0; t += 0.01)
        worst = std::max(worst, std::abs(resolved.eval(t) - traj.eval(t)));
    CHECK(worst < 1e-6);
}

TEST_CASE("profile_from_trajectory validates its interval") {
    Problem fwd(0.5, 0.0, Field::linear(1.0), Degenerate{1.0});
    Trajectory traj = solve(fwd, 2.0);
    CHECK_THROWS_AS(profile_from_trajectory(traj, 1.0, 3.0), ValidationError);
    CHECK_THROWS_AS(profile_from_trajectory(traj, 1.5, 1.0), ValidationError);
}
