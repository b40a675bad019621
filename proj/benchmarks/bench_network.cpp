#include <benchmark/benchmark.h>

#include <vector>

#include "neatduel/network.hpp"

namespace {

using namespace neatduel;

void BM_ActivateFullyConnected(benchmark::State& state) {
    Rng rng(1);
    const auto genome = fully_connected_genome(kDuelIo, static_cast<int>(state.range(0)), rng);
    Network net(genome);
    std::vector<double> sensors(12);
    for (auto& s : sensors) s = rng.uniform();
    for (auto _ : state) benchmark::DoNotOptimize(net.activate(sensors).data());
    state.counters["connections"] = static_cast<double>(genome.connections().size());
}
BENCHMARK(BM_ActivateFullyConnected)->Arg(0)->Arg(5)->Arg(12);

void BM_BuildNetwork(benchmark::State& state) {
    Rng rng(2);
    const auto genome = fully_connected_genome(kDuelIo, 12, rng);
    for (auto _ : state) {
        Network net(genome);
        benchmark::DoNotOptimize(&net);
    }
}
BENCHMARK(BM_BuildNetwork);

void BM_CompatibilityDistance(benchmark::State& state) {
    Rng rng(3);
    const auto a = fully_connected_genome(kDuelIo, 12, rng);
    const auto b = fully_connected_genome(kDuelIo, 12, rng);
    for (auto _ : state) benchmark::DoNotOptimize(compatibility_distance(a, b, {}));
}
BENCHMARK(BM_CompatibilityDistance);

}  // namespace

BENCHMARK_MAIN();
