#include <benchmark/benchmark.h>

#include "affdim/expm.hpp"
#include "affdim/fields.hpp"
#include "affdim/occupation.hpp"
#include "affdim/power_accum.hpp"
#include "affdim/rng.hpp"
#include "affdim/svf.hpp"

using namespace affdim;

namespace {

Matrix bench_contraction(int n) {
    CounterRng rng(5150, static_cast<std::uint64_t>(n));
    Matrix M(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) M(i, j) = 0.2 * rng.gaussian() / n;
    for (int i = 0; i < n; ++i) M(i, i) += 0.5;
    return M;
}

void BM_LogSingularValuesPower(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const long k = state.range(1);
    Matrix W = matrix_power_scale(bench_contraction(n), 0.5);
    for (auto _ : state) {
        auto rates = log_singular_values_power(W, k);
        benchmark::DoNotOptimize(rates);
    }
    state.SetItemsProcessed(state.iterations() * k);
}
BENCHMARK(BM_LogSingularValuesPower)->Args({4, 1024})->Args({8, 1024})->Args({4, 8192});

void BM_SNumeric(benchmark::State& state) {
    Matrix W = matrix_power_scale(bench_contraction(static_cast<int>(state.range(0))), 0.5);
    for (auto _ : state) {
        auto r = s_numeric(W, 0.4);
        benchmark::DoNotOptimize(r);
    }
}
BENCHMARK(BM_SNumeric)->Arg(3)->Arg(6);

void BM_PairEnergy(benchmark::State& state) {
    auto paths = simulate_ofbm(OfbmSpec::scalarHurst(0.5), static_cast<int>(state.range(0)), 1, 42);
    for (auto _ : state) {
        auto est = energy_integral(paths[0], MeasureKind::graph, 1.3);
        benchmark::DoNotOptimize(est);
    }
    const long n = state.range(0);
    state.SetItemsProcessed(state.iterations() * n * (n - 1) / 2);
}
BENCHMARK(BM_PairEnergy)->Arg(512)->Arg(2048);

void BM_BoxCount(benchmark::State& state) {
    auto paths = simulate_ofbm(OfbmSpec::scalarHurst(0.5), static_cast<int>(state.range(0)), 1, 42);
    auto pts = graph_points(paths[0]);
    for (auto _ : state) {
        auto rep = box_count_dimension(pts, 2, 2, 12);
        benchmark::DoNotOptimize(rep);
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_BoxCount)->Arg(1 << 14)->Arg(1 << 16);

void BM_FbmSimulation(benchmark::State& state) {
    for (auto _ : state) {
        auto paths = simulate_ofbm(OfbmSpec::scalarHurst(0.7), static_cast<int>(state.range(0)), 1,
                                   static_cast<std::uint64_t>(state.iterations()));
        benchmark::DoNotOptimize(paths);
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_FbmSimulation)->Arg(1 << 12)->Arg(1 << 16);

}  // namespace

BENCHMARK_MAIN();
