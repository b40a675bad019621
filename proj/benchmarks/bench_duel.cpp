#include <benchmark/benchmark.h>

#include "neatduel/dominance.hpp"
#include "neatduel/duel.hpp"

namespace {

using namespace neatduel;

void BM_DuelTimeout(benchmark::State& state) {
    Rng rng(1);
    const auto a = minimal_genome(kDuelIo, rng);
    const auto b = minimal_genome(kDuelIo, rng);
    auto cfg = DuelConfig::standard();
    cfg.max_steps = static_cast<int>(state.range(0));
    int steps = 0;
    for (auto _ : state) steps += run_duel(a, b, cfg).steps;
    state.counters["steps/s"] = benchmark::Counter(steps, benchmark::Counter::kIsRate);
}
BENCHMARK(BM_DuelTimeout)->Arg(400)->Arg(750);

void BM_Sense(benchmark::State& state) {
    const auto cfg = DuelConfig::standard();
    const auto world = init_duel(cfg);
    for (auto _ : state) benchmark::DoNotOptimize(sense(world, cfg, Robot::a));
}
BENCHMARK(BM_Sense);

void BM_Comparison(benchmark::State& state) {
    Rng rng(2);
    const auto a = fully_connected_genome(kDuelIo, 2, rng);
    const auto b = fully_connected_genome(kDuelIo, 2, rng);
    auto cfg = DuelConfig::standard();
    cfg.max_steps = 200;
    for (auto _ : state) benchmark::DoNotOptimize(compare(a, b, cfg));
}
BENCHMARK(BM_Comparison)->Unit(benchmark::kMillisecond);

}  // namespace
