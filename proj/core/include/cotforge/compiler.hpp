#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cotforge/ar_core.hpp"
#include "cotforge/circuits.hpp"

namespace cotforge {

// A depth-2 circuit compiled into one autoregressive linear threshold.
// With r = s-1 hidden gates the generator has window
//   d = n(2s-1) + 4s-3,  thinking length T = 2s-1,
// and its chain of thought on feature_map(x) reads
//   (y_1, ..., y_r, 0^r, y_s)
// where y_t is the value of gate t. gate_schedule maps gate t (1-based) to
// its step in [1, T]; special_steps is the image {1..r} u {2s-1}.
struct CompiledGenerator {
    LinearThresholdGenerator generator;
    int n = 0;
    int s = 0;
    int thinking_length = 0;  // T
    std::vector<int> gate_schedule;  // size s, 1-based steps
    std::vector<int> special_steps;  // sorted, size s
    double blocking_magnitude = 0.0;  // B

    int d() const { return generator.window(); }
};

// Zero-padded embedding of circuit inputs:
//   (0^{2r}, 1, 0^{2r}, x_n, 0^{2r}, x_{n-1}, ..., 0^{2r}, x_1, 0^{2r})
// with r = s-1. Depends only on (n, s), never on circuit weights.
BitString feature_map(const BitString& x, int s);

// Expected embedding dimension for (n, s).
inline int compiled_dimension(int n, int s) { return n * (2 * s - 1) + 4 * s - 3; }

// The whole image feature_map({0,1}^n); requires n <= 24.
std::vector<BitString> all_phi_images(int n, int s);

// Lay the circuit's weights into a single threshold vector. The blocking
// magnitude B = 1 + sum of |weights| + sum of |biases| forces zeros during
// the r wait steps. Refuses circuits with non-finite weights or B > 2^40
// (beyond that, double sign tests on the compiled weights could round).
CompiledGenerator compile(const ThresholdCircuit& c);

// Wrap a single threshold gate (weights over x, bias) as an s=2 circuit with
// a pass-through output gate, so it can be compiled like everything else.
// Costs T=3 instead of the 1 step a bare gate would need.
ThresholdCircuit pad_single_gate(const std::vector<double>& weights, double bias);

struct CompileViolation {
    BitString x;
    int step = 0;          // 1-based step in [1, T], 0 for end-to-end mismatch
    std::string kind;      // "end_to_end" | "gate_trace" | "nonzero_off_schedule"
    int expected = 0;
    int actual = 0;
};

struct VerifyReport {
    std::vector<CompileViolation> violations;
    std::uint64_t inputs_checked = 0;
    bool ok() const { return violations.empty(); }
};

// Check the three compiled-generator guarantees (end-to-end match, gate value
// at its scheduled step, zero elsewhere) on every input when n <=
// exhaustive_limit, otherwise on `samples` seeded random inputs.
VerifyReport verify_compiled(const CompiledGenerator& cg, const ThresholdCircuit& c,
                             int exhaustive_limit, std::uint64_t seed = 0,
                             std::uint64_t samples = 10000);

std::string compiled_to_json(const CompiledGenerator& cg);
CompiledGenerator compiled_from_json(const std::string& text);

}  // namespace cotforge
