// Microbenchmarks for the hot paths: width selection, histogram counting,
// feature-matrix construction, and the per-window descriptor baselines.

#include "histofeat/baseline.hpp"
#include "histofeat/feature_design.hpp"
#include "histofeat/histogram.hpp"
#include "histofeat/rng.hpp"
#include "histofeat/signal.hpp"

#include <benchmark/benchmark.h>

#include <vector>

using namespace histofeat;

namespace {

// Uniform amplitudes keep every bin populated, so feature design never
// rejects the signal and the timings stay comparable across sizes.
std::vector<double> uniform_signal(std::size_t n, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<double> xs(n);
    for (auto& x : xs) x = 10.0 * rng.next_double();
    return xs;
}

void bm_scott_width(benchmark::State& state) {
    auto xs = uniform_signal(static_cast<std::size_t>(state.range(0)), 1);
    for (auto _ : state) {
        benchmark::DoNotOptimize(scott_bin_width(xs));
    }
}

void bm_histogram_counts(benchmark::State& state) {
    auto xs = uniform_signal(static_cast<std::size_t>(state.range(0)), 2);
    BinSpec spec = make_bin_spec(xs);
    for (auto _ : state) {
        benchmark::DoNotOptimize(histogram_counts(xs, spec));
    }
}

void bm_design_features(benchmark::State& state) {
    SignalSeries s;
    s.values = uniform_signal(static_cast<std::size_t>(state.range(0)), 3);
    s.state_label = "bench";
    for (auto _ : state) {
        benchmark::DoNotOptimize(design_features(s));
    }
}

void bm_td_features(benchmark::State& state) {
    auto xs = uniform_signal(static_cast<std::size_t>(state.range(0)), 4);
    for (auto _ : state) {
        benchmark::DoNotOptimize(td_features(xs));
    }
}

void bm_fd_features(benchmark::State& state) {
    auto xs = uniform_signal(static_cast<std::size_t>(state.range(0)), 5);
    for (auto _ : state) {
        benchmark::DoNotOptimize(fd_features(xs, 12));
    }
}

BENCHMARK(bm_scott_width)->Arg(1 << 12)->Arg(1 << 16);
BENCHMARK(bm_histogram_counts)->Arg(1 << 12)->Arg(1 << 16);
BENCHMARK(bm_design_features)->Arg(1 << 12)->Arg(1 << 16);
BENCHMARK(bm_td_features)->Arg(1 << 10)->Arg(1 << 14);
BENCHMARK(bm_fd_features)->Arg(1 << 10)->Arg(1 << 14);

} // namespace

BENCHMARK_MAIN();
