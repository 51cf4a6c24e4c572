#include <benchmark/benchmark.h>

#include "diracspec/propagate.hpp"
#include "diracspec/resolvent.hpp"
#include "diracspec/spectrum.hpp"
#include "diracspec/weyl.hpp"

using namespace dirac;

namespace {

ProblemSpec perturbed() {
    auto s = example_problem();
    s.potential = PotentialField::constant(0.2, 0.0, 0.0);
    return s;
}

void BM_CharDelta(benchmark::State& state) {
    const auto s = perturbed();
    const double l = static_cast<double>(state.range(0)) + 0.37;
    const auto grid = make_grid(s, l);
    for (auto _ : state) benchmark::DoNotOptimize(char_delta(s, l, grid));
    state.counters["nodes"] = static_cast<double>(grid.node_count());
}
BENCHMARK(BM_CharDelta)->Arg(1)->Arg(10)->Arg(100)->Unit(benchmark::kMicrosecond);

void BM_FindEigenvalues(benchmark::State& state) {
    const auto s = perturbed();
    const Window w{-0.5, static_cast<double>(state.range(0))};
    for (auto _ : state) benchmark::DoNotOptimize(find_eigenvalues(s, w));
}
BENCHMARK(BM_FindEigenvalues)->Arg(10)->Arg(40)->Unit(benchmark::kMillisecond);

void BM_SpectralData(benchmark::State& state) {
    const auto s = perturbed();
    for (auto _ : state) benchmark::DoNotOptimize(spectral_data(s, {-0.5, 12.0}));
}
BENCHMARK(BM_SpectralData)->Unit(benchmark::kMillisecond);

void BM_ResolventApply(benchmark::State& state) {
    const auto s = perturbed();
    const auto grid = make_grid(s, 1.3);
    const auto f = RhsField::sinusoid({{1, 1.0, 1.0, 0.0}});
    for (auto _ : state) benchmark::DoNotOptimize(resolvent_apply(s, 1.3, f, grid));
}
BENCHMARK(BM_ResolventApply)->Unit(benchmark::kMillisecond);

void BM_WeylFunction(benchmark::State& state) {
    const auto s = perturbed();
    const auto grid = make_grid(s, 2.5);
    for (auto _ : state) benchmark::DoNotOptimize(weyl_function(s, 2.5, grid));
}
BENCHMARK(BM_WeylFunction)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
