// SPDX-License-Identifier: Apache-2.0
#include <benchmark/benchmark.h>

#include <cmath>

#include "winnbeta/detrending.hpp"
#include "winnbeta/pipeline.hpp"
#include "winnbeta/simulation.hpp"
#include "winnbeta/stats_tests.hpp"

namespace {

std::vector<double> noise(std::size_t n) {
    winnbeta::sim::Rng rng(1);
    std::vector<double> v(n);
    for (auto& x : v) x = rng.normal();
    return v;
}

void BM_LjungBox(benchmark::State& state) {
    const auto y = noise(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(winnbeta::ljung_box(y, 10));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_LjungBox)->RangeMultiplier(4)->Range(64, 16384)->Complexity();

void BM_FitSpline(benchmark::State& state) {
    const auto y = noise(96);
    const int df = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(winnbeta::fit_spline(y, df));
}
BENCHMARK(BM_FitSpline)->DenseRange(2, 14, 4);

void BM_TuneDf(benchmark::State& state) {
    auto y = noise(96);
    for (std::size_t i = 0; i < y.size(); ++i) y[i] += std::sin(0.1 * static_cast<double>(i));
    const auto grid = winnbeta::default_df_grid(96, 15);
    for (auto _ : state) benchmark::DoNotOptimize(winnbeta::tune_df(y, grid, 10));
}
BENCHMARK(BM_TuneDf);

void BM_WinnbetaCorrect(benchmark::State& state) {
    winnbeta::sim::BenchmarkConfig cfg;
    const auto spec = winnbeta::sim::scenario_spec("mixture", 7, cfg);
    const auto series = winnbeta::sim::generate(spec).to_series("m");
    const winnbeta::RunConfig run;
    for (auto _ : state) benchmark::DoNotOptimize(winnbeta::winnbeta_correct(series, run));
}
BENCHMARK(BM_WinnbetaCorrect)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
