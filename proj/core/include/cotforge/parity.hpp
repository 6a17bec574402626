#pragma once

#include <cstdint>
#include <functional>
#include <variant>
#include <vector>

#include "cotforge/bits.hpp"

namespace cotforge {

// Hidden parity over a k-subset of [d] with per-step generation noise eta.
// Support indices are 0-based and sorted.
struct ParityTask {
    int d = 0;
    int k = 0;
    std::vector<int> support;
    double eta = 0.0;
};

ParityTask make_parity_task(int d, int k, double eta, std::uint64_t seed);

// x plus the noisy chain (z~_1, ..., z~_k).
struct ParityCotExample {
    BitString x;
    BitString trace;
};

// Which ordering of the support each generator uses. FixedOrder holds one
// bijection; UniformOrder draws a fresh uniform one per example;
// AdversarialOrder sees the whole x batch and returns per-example orders.
struct FixedOrder {
    std::vector<int> order;  // support coordinates in generation order
};
struct UniformOrder {};
struct AdversarialOrder {
    std::function<std::vector<std::vector<int>>(const std::vector<BitString>&)> choose;
};
using OrderSource = std::variant<FixedOrder, UniformOrder, AdversarialOrder>;

// Built-in adversary: orders the support by the example's bit values (zeros
// first, ties by index). Any order-based strategy leaves the recovery
// statistic's distribution unchanged; this one is a concrete stress case.
AdversarialOrder sorted_by_bits_adversary(std::vector<int> support);

// Noisy chain generation: z~_0 = 0, z~_t = z~_{t-1} xor x_{pi(t)} xor xi_t with
// xi_t ~ Bern(eta). When noisy_z0 is set, z~_0 itself is drawn Bern(eta)
// (sensitivity variant; the emitted trace still starts at z~_1).
std::vector<ParityCotExample> gen_parity_cot(const ParityTask& task, const OrderSource& source,
                                             int m, std::uint64_t seed, bool noisy_z0 = false);

// Probability that the final token disagrees with the clean parity:
// (1 - (1-2 eta)^k) / 2.
double eff_noise(double eta, int k);

// Correlation recovery: increments delta~_t = 1 - 2(z~_t xor z~_{t-1}), the
// per-example statistic s~ = sum_t delta~_t, and score(j) = mean over
// examples of (1-2 x_j) s~. Returns the k indices of largest score (ties to
// the smallest index), sorted ascending. Works against any order source.
std::vector<int> recover_support(const std::vector<ParityCotExample>& data, int d, int k);

// Single fixed generator: per-position scores Score_t(j) recover the support
// in generation order (ties to the smallest index).
std::vector<int> recover_support_single(const std::vector<ParityCotExample>& data, int d, int k);

// Fano bound on the samples needed for support recovery from a uniformly
// drawn generator: ((1-delta) log2 C(d,k) - 1) / log2(k+1).
double it_lower_bound(int d, int k, double delta);
// The k log2(d/k) relaxation, valid for k <= d/2.
double it_lower_bound_simplified(int d, int k, double delta);

}  // namespace cotforge
