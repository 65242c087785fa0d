#include "relayopt/config.hpp"
#include "relayopt/model.hpp"
#include "relayopt/solver.hpp"

#include <benchmark/benchmark.h>

namespace {

using namespace relayopt;

void BM_approx_error(benchmark::State& state) {
    const Scenario sc = reference_scenario();
    double x = 30.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(approx_error(sc.params, x, 50.0));
        x = x < 130.0 ? x + 0.1 : 30.0;
    }
}
BENCHMARK(BM_approx_error);

void BM_g_prime(benchmark::State& state) {
    const Scenario sc = reference_scenario();
    double x = 30.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(g_prime(sc.params, 50.0, 50.0, x));
        x = x < 130.0 ? x + 0.1 : 30.0;
    }
}
BENCHMARK(BM_g_prime);

void BM_optimize_blocklength(benchmark::State& state) {
    const Scenario sc = reference_scenario();
    for (auto _ : state) {
        benchmark::DoNotOptimize(optimize_blocklength(sc.params, 80.0, sc.solver));
    }
}
BENCHMARK(BM_optimize_blocklength);

void BM_optimize_location(benchmark::State& state) {
    const Scenario sc = reference_scenario();
    for (auto _ : state) {
        benchmark::DoNotOptimize(optimize_location(sc.params, 50, 50, sc.solver));
    }
}
BENCHMARK(BM_optimize_location);

void BM_joint_optimize(benchmark::State& state) {
    const Scenario sc = reference_scenario();
    SolverConfig cfg = sc.solver;
    std::uint64_t seed = 0;
    for (auto _ : state) {
        cfg.seed = seed++;
        benchmark::DoNotOptimize(joint_optimize(sc.params, cfg));
    }
}
BENCHMARK(BM_joint_optimize);

void BM_exhaustive_search(benchmark::State& state) {
    const Scenario sc = reference_scenario();
    for (auto _ : state) {
        benchmark::DoNotOptimize(exhaustive_search(sc.params, sc.solver));
    }
}
BENCHMARK(BM_exhaustive_search);

}  // namespace

BENCHMARK_MAIN();
