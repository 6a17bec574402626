#include <benchmark/benchmark.h>

#include "cotforge/compiler.hpp"
#include "cotforge/rng.hpp"

using namespace cotforge;

namespace {
ThresholdCircuit random_circuit(int n, int s, Rng& rng) {
    ThresholdCircuit c;
    c.n = n;
    const auto draw = [&rng]() { return static_cast<double>((long long)rng.below(7) - 3); };
    for (int g = 0; g < s - 1; ++g) {
        std::vector<double> w(static_cast<std::size_t>(n));
        for (auto& v : w) v = draw();
        c.hidden_weights.push_back(std::move(w));
        c.hidden_biases.push_back(draw());
        c.output_weights.push_back(draw());
    }
    c.output_bias = draw();
    return c;
}
}  // namespace

static void CompileAndVerify(benchmark::State& state) {
    Rng rng(7);
    const auto c = random_circuit(static_cast<int>(state.range(0)), 4, rng);
    for (auto _ : state) {
        const auto cg = compile(c);
        const auto report = verify_compiled(cg, c, 8);
        benchmark::DoNotOptimize(report);
    }
}
BENCHMARK(CompileAndVerify)->Arg(4)->Arg(6)->Arg(8);
