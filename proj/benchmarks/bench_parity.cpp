#include <benchmark/benchmark.h>

#include "cotforge/parity.hpp"

using namespace cotforge;

static void ParityRecovery(benchmark::State& state) {
    const int d = 100;
    const int k = static_cast<int>(state.range(0));
    const auto task = make_parity_task(d, k, 0.1, 11);
    const auto data = gen_parity_cot(task, UniformOrder{}, 2000, 13);
    for (auto _ : state) {
        auto support = recover_support(data, d, k);
        benchmark::DoNotOptimize(support);
    }
}
BENCHMARK(ParityRecovery)->Arg(10)->Arg(50)->Arg(90);
