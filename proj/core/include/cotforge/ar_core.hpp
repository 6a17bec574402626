#pragma once

#include <vector>

#include "cotforge/bits.hpp"
#include "cotforge/errors.hpp"

namespace cotforge {

// Next-token generator: a linear threshold over a sliding window of the last
// d tokens. The window size is the weight count; weights[d-1] multiplies the
// most recent token. Immutable after construction; all operations are pure.
struct LinearThresholdGenerator {
    std::vector<double> weights;

    int window() const { return static_cast<int>(weights.size()); }
};

// thr(a) = 1{a >= 0}. `tol` widens the acceptance region to a >= -tol for
// stress tests; the default 0 is the exact sign test used everywhere else.
inline int thr(double a, double tol = 0.0) { return a >= -tol ? 1 : 0; }

// One generation step on a nonempty sequence. Only the last min(d, |seq|)
// tokens participate; shorter sequences clip the window from the left.
int next_token(const LinearThresholdGenerator& g, const BitString& seq, double tol = 0.0);

// The length-T chain produced by applying next_token and appending, T times.
// The last bit equals end_to_end(g, x, T).
BitString chain_of_thought(const LinearThresholdGenerator& g, const BitString& x, int T,
                           double tol = 0.0);

// Final bit of the chain of thought.
int end_to_end(const LinearThresholdGenerator& g, const BitString& x, int T, double tol = 0.0);

}  // namespace cotforge
