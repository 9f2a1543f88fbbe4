#include <random>

#include <benchmark/benchmark.h>

#include "riskyish/cluster.hpp"

using namespace riskyish;

namespace {

std::vector<ScoreVector> vectors(std::size_t n) {
    std::mt19937_64 rng(n);
    std::uniform_int_distribution<int> level(0, 4);
    std::vector<ScoreVector> out;
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<double> v(25);
        for (auto& x : v) x = level(rng);
        out.emplace_back(std::move(v));
    }
    return out;
}

template <auto Fn>
void distances(benchmark::State& state) {
    const auto vs = vectors(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(Fn(vs));
}

template <auto Fn>
void ward(benchmark::State& state) {
    const auto d = cluster::reference::pairwise_distances(vectors(static_cast<std::size_t>(state.range(0))));
    for (auto _ : state) benchmark::DoNotOptimize(Fn(d));
}

} // namespace

BENCHMARK(distances<cluster::reference::pairwise_distances>)->Name("distances/serial")->RangeMultiplier(4)->Range(64, 2048);
BENCHMARK(distances<cluster::pairwise_distances>)->Name("distances/openmp")->RangeMultiplier(4)->Range(64, 2048);
BENCHMARK(ward<cluster::reference::ward_linkage>)->Name("ward/serial")->RangeMultiplier(4)->Range(64, 1024);
BENCHMARK(ward<cluster::ward_linkage>)->Name("ward/openmp")->RangeMultiplier(4)->Range(64, 1024);

BENCHMARK_MAIN();
