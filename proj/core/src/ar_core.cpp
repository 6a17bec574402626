#include "cotforge/ar_core.hpp"

#include <algorithm>

namespace cotforge {

namespace {

// Dot product of the last `take` weights with the last `take` tokens of seq,
// where seq is given as (buffer, len) so chain_of_thought can reuse one
// growing buffer without re-slicing.
double window_dot(const LinearThresholdGenerator& g, const std::uint8_t* seq, std::size_t len) {
    const std::size_t d = g.weights.size();
    const std::size_t take = std::min(d, len);
    double acc = 0.0;
    const double* w = g.weights.data() + (d - take);
    const std::uint8_t* t = seq + (len - take);
    for (std::size_t i = 0; i < take; ++i) {
        if (t[i]) acc += w[i];
    }
    return acc;
}

}  // namespace

int next_token(const LinearThresholdGenerator& g, const BitString& seq, double tol) {
    if (seq.empty()) throw EmptySequence();
    return thr(window_dot(g, seq.data(), seq.size()), tol);
}

BitString chain_of_thought(const LinearThresholdGenerator& g, const BitString& x, int T,
                           double tol) {
    if (x.empty()) throw EmptySequence();
    BitString seq = x;
    seq.reserve(x.size() + static_cast<std::size_t>(T));
    BitString chain;
    chain.reserve(static_cast<std::size_t>(T));
    for (int t = 0; t < T; ++t) {
        const int bit = thr(window_dot(g, seq.data(), seq.size()), tol);
        chain.push_back(static_cast<std::uint8_t>(bit));
        seq.push_back(static_cast<std::uint8_t>(bit));
    }
    return chain;
}

int end_to_end(const LinearThresholdGenerator& g, const BitString& x, int T, double tol) {
    return chain_of_thought(g, x, T, tol).back();
}

}  // namespace cotforge
