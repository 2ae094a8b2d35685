#include <benchmark/benchmark.h>

#include "panto/linear.hpp"
#include "panto/stepper.hpp"

namespace {

void BM_PhiSeries(benchmark::State& state) {
    const double t = static_cast<double>(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(panto::phi_series(1.0, 0.5, t));
}
BENCHMARK(BM_PhiSeries)->Arg(1)->Arg(10)->Arg(100);

void BM_SolveDegenerate(benchmark::State& state) {
    panto::Problem p(0.5, 0.0, panto::Field::linear(1.0), panto::Degenerate{1.0});
    const double t_end = static_cast<double>(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(panto::solve(p, t_end));
}
BENCHMARK(BM_SolveDegenerate)->Arg(5)->Arg(50);

void BM_SolveSegmented(benchmark::State& state) {
    panto::Problem p(0.5, 1.0, panto::Field::linear(1.0),
                     panto::Profile{[](double) { return 1.0; },
                                    std::function<double(double)>([](double) { return 0.0; }),
                                    0});
    for (auto _ : state)
        benchmark::DoNotOptimize(panto::solve(p, 64.0));
}
BENCHMARK(BM_SolveSegmented);

} // namespace

BENCHMARK_MAIN();
