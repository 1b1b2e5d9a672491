#include <benchmark/benchmark.h>

#include "liftkit/eig_backend.hpp"
#include "liftkit/experiments.hpp"
#include "liftkit/lifting.hpp"
#include "liftkit/matgen.hpp"

using namespace liftkit;

static void BM_EigAll(benchmark::State& state) {
    const auto n = static_cast<Eigen::Index>(state.range(0));
    const Matrix a = make_large(n, 1e-12, 7).a;
    for (auto _ : state) {
        benchmark::DoNotOptimize(eig_all(a));
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_EigAll)->RangeMultiplier(2)->Range(8, 256)->Complexity(benchmark::oNCubed);

static void BM_SolveNullpair(benchmark::State& state) {
    const auto n = static_cast<Eigen::Index>(state.range(0));
    const LargeTestMatrix tm = make_large(n, 1e-12, 7);
    const LiftedSystem sys = build_lift(tm.a, random_lift_vectors(n, 1.0, 1.0, 42),
                                        tm.right_nullvector(), tm.left_nullvector());
    for (auto _ : state) {
        benchmark::DoNotOptimize(solve_nullpair(sys));
    }
}
BENCHMARK(BM_SolveNullpair)->Arg(3)->Arg(16)->Arg(100)->Arg(200);

static void BM_BuildLift(benchmark::State& state) {
    const auto n = static_cast<Eigen::Index>(state.range(0));
    const LargeTestMatrix tm = make_large(n, 1e-12, 7);
    const LiftVectors lift = random_lift_vectors(n, 1.0, 1.0, 42);
    const Vector phi = tm.right_nullvector();
    const Vector psi = tm.left_nullvector();
    for (auto _ : state) {
        benchmark::DoNotOptimize(build_lift(tm.a, lift, phi, psi));
    }
}
BENCHMARK(BM_BuildLift)->Arg(16)->Arg(100)->Arg(500);

static void BM_Trials2x2(benchmark::State& state) {
    const auto trials = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(run_trials(SmallProblem{1e-12}, 1.0, trials, 42));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Trials2x2)->Arg(100)->Arg(1000);

static void BM_MakeLarge(benchmark::State& state) {
    const auto n = static_cast<Eigen::Index>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(make_large(n, 1e-12, 7));
    }
}
BENCHMARK(BM_MakeLarge)->Arg(100)->Arg(500);

BENCHMARK_MAIN();
