#include <benchmark/benchmark.h>

#include "cotforge/consistency.hpp"
#include "cotforge/rng.hpp"

using namespace cotforge;

static void ConsistentGenerator(benchmark::State& state) {
    const int d = static_cast<int>(state.range(0));
    const int examples = static_cast<int>(state.range(1));
    Rng rng(3);
    LinearThresholdGenerator target;
    target.weights.resize(static_cast<std::size_t>(d));
    for (auto& w : target.weights) w = static_cast<double>((long long)rng.below(11) - 5);
    CotDataset data;
    for (int i = 0; i < examples; ++i) {
        CotExample ex;
        ex.x = random_bits(static_cast<std::size_t>(d), rng);
        ex.z = chain_of_thought(target, ex.x, 6);
        data.push_back(std::move(ex));
    }
    const auto problem = dataset_problem(data, d);
    for (auto _ : state) {
        auto g = consistent_generator(problem);
        benchmark::DoNotOptimize(g);
    }
}
BENCHMARK(ConsistentGenerator)->Args({12, 50})->Args({32, 100})->Args({55, 300});
