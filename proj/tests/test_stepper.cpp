#include <doctest.h>

#include <cmath>
#include <random>

#include "panto/errors.hpp"
#include "panto/linear.hpp"
#include "panto/stepper.hpp"

using namespace panto;

namespace {

double max_series_error(double lambda, double q, const SolveConfig& cfg,
                        double t_end = 5.0) {
    Problem p(q, 0.0, Field::linear(lambda), Degenerate{1.0});
    Trajectory traj = solve(p, t_end, cfg);
    double worst = 0.0;
    for (int i = 0; i <= 200; ++i) {
        const double t = t_end * i / 200.0;
        const double exact = phi_series(lambda, q, t);
        const double err =
            std::abs(traj.eval(t) - exact) / std::max(1.0, std::abs(exact));
        worst = std::max(worst, err);
    }
    return worst;
}

} // namespace

TEST_CASE("config validation") {
    SolveConfig cfg;
    cfg.steps_per_segment = 2;
    CHECK_THROWS_AS(cfg.validate(), ValidationError);
    cfg = SolveConfig{};
    cfg.growth = 0.9;
    CHECK_THROWS_AS(cfg.validate(), ValidationError);
    cfg = SolveConfig{};
    cfg.picard_tol = 0.0;
    CHECK_THROWS_AS(cfg.validate(), ValidationError);
    Problem p(0.5, 0.0, Field::linear(1.0), Degenerate{1.0});
    CHECK_THROWS_AS(solve(p, -1.0), ValidationError);
}

TEST_CASE("constant field: x = x0 + c t") {
    Problem p(0.5, 0.0, Field::affine(0.0, 2.0), Degenerate{3.0});
    Trajectory traj = solve(p, 100.0);
    for (double t : {0.0, 0.5, 1.0, 17.0, 99.5}) {
        const double exact = 3.0 + 2.0 * t;
        CHECK(std::abs(traj.eval(t) - exact) <= 1e-12 * std::max(1.0, exact));
    }
}

TEST_CASE("zero field: constant solution") {
    Problem p(0.3, 0.0, Field::linear(0.0), Degenerate{5.0});
    Trajectory traj = solve(p, 20.0);
    CHECK(traj.eval(13.7) == doctest::Approx(5.0).epsilon(1e-14));
}

TEST_CASE("degenerate linear solve matches the series") {
    CHECK(max_series_error(1.0, 0.5, SolveConfig{}) < 1e-8);
}

TEST_CASE("segment advance: delayed lookups stay in covered territory") {
    // eta(t) = t on [0.5, 1], F identity: on [1, 2], x(t) = t^2/4 + 3/4.
    Problem p(0.5, 1.0, Field::linear(1.0),
              Profile{[](double t) { return t; },
                      std::function<double(double)>([](double) { return 1.0; }),
                      1});
    Trajectory traj = solve(p, 2.0);
    CHECK(traj.eval(2.0) == doctest::Approx(1.75).epsilon(1e-10));
    CHECK(traj.eval(1.5) == doctest::Approx(1.5 * 1.5 / 4 + 0.75).epsilon(1e-10));
}

TEST_CASE("segment boundaries are exact knots and values chain exactly") {
    Problem p(0.5, 1.0, Field::linear(1.0),
              Profile{[](double) { return 1.0; },
                      std::function<double(double)>([](double) { return 0.0; }),
                      0});
    Trajectory traj = solve(p, 8.0);
    for (double b : {2.0, 4.0}) {
        bool found = false;
        for (const Step& s : traj.steps())
            if (s.t_hi == b) found = true;
        CHECK(found);
    }
    for (size_t i = 0; i + 1 < traj.steps().size(); ++i)
        CHECK(traj.steps()[i].x_hi == traj.steps()[i + 1].x_lo);
}

TEST_CASE("degenerate bootstrap: first step error is O(h^3)") {
    Problem p(0.5, 0.0, Field::linear(1.0), Degenerate{1.0});
    Trajectory traj = solve(p, 1.0);
    const double h = traj.steps().front().t_hi;
    const double expected = 1.0 + h + 0.5 * 0.5 * h * h;
    CHECK(std::abs(traj.eval(h) - expected) < 10.0 * h * h * h);
}

TEST_CASE("zero initial value: identically zero solution") {
    Problem p(0.5, 0.0, Field::linear(1.0), Degenerate{0.0});
    Trajectory traj = solve(p, 10.0);
    for (double t : {0.0, 1.0, 5.0, 10.0})
        CHECK(traj.eval(t) == 0.0);
}

TEST_CASE("determinism: identical inputs give identical trajectories") {
    Problem p(0.5, 0.0, Field::linear(-1.0), Degenerate{1.0});
    Trajectory t1 = solve(p, 10.0);
    Trajectory t2 = solve(p, 10.0);
    REQUIRE(t1.steps().size() == t2.steps().size());
    for (size_t i = 0; i < t1.steps().size(); ++i) {
        CHECK(t1.steps()[i].t_hi == t2.steps()[i].t_hi);
        CHECK(t1.steps()[i].x_hi == t2.steps()[i].x_hi);
        CHECK(t1.steps()[i].d_hi == t2.steps()[i].d_hi);
    }
}

TEST_CASE("4th-order convergence against the series oracle") {
    SolveConfig coarse, fine;
    coarse.steps_per_segment = 64;
    fine.steps_per_segment = 128;
    const double e1 = max_series_error(1.0, 0.5, coarse);
    const double e2 = max_series_error(1.0, 0.5, fine);
    const double factor = e1 / e2;
    CHECK(factor >= 12.0);
    CHECK(factor <= 20.0);
}

TEST_CASE("lambda > 0: computed solution strictly increasing") {
    Problem p(0.5, 0.0, Field::linear(2.0), Degenerate{1.0});
    Trajectory traj = solve(p, 20.0);
    double prev = traj.eval(0.0);
    for (double t = 0.1; t <= 20.0; t += 0.1) {
        const double v = traj.eval(t);
        CHECK(v > prev);
        prev = v;
    }
}

TEST_CASE("equation residual at 1000 random times") {
    Problem p(0.5, 0.0, Field::linear(-1.0), Degenerate{1.0});
    SolveConfig cfg;
    Trajectory traj = solve(p, 10.0, cfg);
    std::mt19937 rng(123);
    std::uniform_real_distribution<double> dist(0.001, 9.999);
    for (int i = 0; i < 1000; ++i) {
        const double t = dist(rng);
        CHECK(std::abs(traj.deriv(t, Side::Right) -
                       p.field()(traj.eval(0.5 * t))) <= cfg.residual_tol);
    }
}

TEST_CASE("fast-growing field overflows with a reported time") {
    // F(x) = x^2 pushes the float range quickly from a large start.
    Problem p(0.5, 0.0, Field::polynomial({0.0, 0.0, 1.0}), Degenerate{1e200});
    try {
        solve(p, 10.0);
        FAIL("expected overflow");
    } catch (const OverflowError& e) {
        CHECK(e.time_reached() >= 0.0);
        CHECK(e.time_reached() <= 10.0);
    }
}
