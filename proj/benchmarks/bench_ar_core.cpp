#include <benchmark/benchmark.h>

#include "cotforge/ar_core.hpp"
#include "cotforge/rng.hpp"

using namespace cotforge;

static void ChainOfThought(benchmark::State& state) {
    const int d = static_cast<int>(state.range(0));
    Rng rng(1);
    LinearThresholdGenerator g;
    g.weights.resize(static_cast<std::size_t>(d));
    for (auto& w : g.weights) w = rng.real01() * 2 - 1;
    const BitString x = random_bits(static_cast<std::size_t>(d), rng);
    for (auto _ : state) {
        auto chain = chain_of_thought(g, x, 16);
        benchmark::DoNotOptimize(chain);
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(ChainOfThought)->RangeMultiplier(2)->Range(16, 256)->Complexity();
