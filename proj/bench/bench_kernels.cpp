// Serial references against the OpenMP kernels.

#include "crossimpact/microstructure.hpp"
#include "crossimpact/optimizer.hpp"
#include "crossimpact/synth.hpp"

#include <benchmark/benchmark.h>

using namespace crossimpact;

namespace {

const PairModel kModel{{1.13e-4, 7.34, 0.14}, {0.79e-4, 4.75, 0.03}, {0.61}, {0.50}};

const SynthCorpus& corpus() {
    static const SynthCorpus c = [] {
        SynthConfig cfg;
        cfg.seed = 3;
        cfg.days = 16;
        cfg.seconds_per_day = 22800;
        cfg.G_ij = kModel.G_ij;
        cfg.G_ji = kModel.G_ji;
        return generate_corpus(cfg);
    }();
    return c;
}

GridSpec grid_of(int steps) {
    GridSpec g;
    g.kappa_steps = steps;
    return g;
}

void BM_surface_serial(benchmark::State& st) {
    const auto g = grid_of(static_cast<int>(st.range(0)));
    for (auto _ : st) benchmark::DoNotOptimize(build_surface_serial(Presets{}, kModel, 1.0, g));
}

void BM_surface_parallel(benchmark::State& st) {
    const auto g = grid_of(static_cast<int>(st.range(0)));
    for (auto _ : st) benchmark::DoNotOptimize(build_surface(Presets{}, kModel, 1.0, g));
}

void BM_response_serial(benchmark::State& st) {
    const auto& c = corpus();
    for (auto _ : st) benchmark::DoNotOptimize(response_curve_serial(c.bars_i, c.bars_j, static_cast<int>(st.range(0))));
}

void BM_response_parallel(benchmark::State& st) {
    const auto& c = corpus();
    for (auto _ : st) benchmark::DoNotOptimize(response_curve(c.bars_i, c.bars_j, static_cast<int>(st.range(0))));
}

void BM_correlator_serial(benchmark::State& st) {
    const auto signs = generate_signs(SynthConfig{}).first;
    for (auto _ : st) benchmark::DoNotOptimize(sign_self_correlator_serial(signs, static_cast<int>(st.range(0))));
}

void BM_correlator_parallel(benchmark::State& st) {
    const auto signs = generate_signs(SynthConfig{}).first;
    for (auto _ : st) benchmark::DoNotOptimize(sign_self_correlator(signs, static_cast<int>(st.range(0))));
}

}  // namespace

BENCHMARK(BM_surface_serial)->Arg(50)->Arg(200)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_surface_parallel)->Arg(50)->Arg(200)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_response_serial)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_response_parallel)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_correlator_serial)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_correlator_parallel)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
