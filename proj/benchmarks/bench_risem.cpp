#include <benchmark/benchmark.h>

#include <vector>

#include "risem/channel.hpp"
#include "risem/em.hpp"
#include "risem/outage.hpp"
#include "risem/presets.hpp"
#include "risem/sampling.hpp"

using namespace risem;

static void BM_ComplexGaussian(benchmark::State& state) {
    RngStream rng(1, 0);
    const auto n = static_cast<std::size_t>(state.range(0));
    std::vector<Complex> out(n);
    for (auto _ : state) {
        fill_standard_complex_gaussian(rng, out.data(), n);
        benchmark::DoNotOptimize(out.data());
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ComplexGaussian)->Arg(1 << 12);

static void BM_VonMises(benchmark::State& state) {
    RngStream rng(1, 1);
    const double kappa = static_cast<double>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(sample_von_mises(rng, kappa, 4096));
    state.SetItemsProcessed(state.iterations() * 4096);
}
BENCHMARK(BM_VonMises)->Arg(1)->Arg(3)->Arg(100);

static void BM_CorrelatedDraw(benchmark::State& state) {
    const auto corr = build_correlation_matrix(
        RisGeometry::square(static_cast<std::size_t>(state.range(0)), 0.1 / 8, 0.1));
    corr.factor();
    RngStream rng(1, 2);
    for (auto _ : state) benchmark::DoNotOptimize(sample_correlated_complex_gaussian(rng, corr, 1.0));
}
BENCHMARK(BM_CorrelatedDraw)->Arg(6)->Arg(10)->Arg(16);

static void BM_Simulate(benchmark::State& state, const char* preset) {
    auto scenario = find_preset(preset).spec.scenario;
    scenario.sample_count = 2000;
    for (auto _ : state) benchmark::DoNotOptimize(simulate_equivalent_channel(RngStream(1, 0), scenario));
    state.SetItemsProcessed(state.iterations() * 2000);
}
BENCHMARK_CAPTURE(BM_Simulate, fig1b_N100, "fig1b-N100")->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Simulate, fig2b_N196, "fig2b-N196")->Unit(benchmark::kMillisecond);

static void BM_EmFit(benchmark::State& state) {
    auto scenario = find_preset("fig1b-N36").spec.scenario;
    scenario.sample_count = static_cast<std::size_t>(state.range(0));
    const auto samples = simulate_equivalent_channel(RngStream(1, 0), scenario).samples;
    for (auto _ : state) {
        RngStream rng(1, 1);
        benchmark::DoNotOptimize(fit(samples, rng));
    }
}
BENCHMARK(BM_EmFit)->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond);

static void BM_OutageCurve(benchmark::State& state) {
    const NakagamiMixture mix{{NakagamiComponent{0.4, 1.3, 1e-12}, NakagamiComponent{0.6, 4.0, 3e-12}}};
    const auto grid = default_rate_grid();
    for (auto _ : state) benchmark::DoNotOptimize(mixture_outage_curve(mix, 124.0, grid));
}
BENCHMARK(BM_OutageCurve);

BENCHMARK_MAIN();
