#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace cotforge {

// splitmix64 finalizer. Fixed constants, stable across platforms.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

// FNV-1a, used to map experiment-id strings to sub-seed streams.
inline std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 0xCBF29CE484222325ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001B3ull;
    }
    return h;
}

// Sub-seed derivation scheme: every stochastic component draws its seed from
//   derive_seed(global_seed, stream, index)
// where `stream` identifies the component (hash of the experiment id) and
// `index` is the trial/example counter. Two splitmix64 rounds decorrelate the
// inputs; the scheme is pure arithmetic, so sharded generation is
// order-independent and thread-count-independent.
inline std::uint64_t derive_seed(std::uint64_t global_seed, std::uint64_t stream,
                                 std::uint64_t index) {
    std::uint64_t s = splitmix64(global_seed ^ splitmix64(stream));
    return splitmix64(s + 0x9E3779B97F4A7C15ull * (index + 1));
}

inline std::uint64_t derive_seed(std::uint64_t global_seed, const std::string& stream,
                                 std::uint64_t index) {
    return derive_seed(global_seed, fnv1a(stream), index);
}

// mt19937_64 wrapper with platform-stable helpers. std::uniform_int_distribution
// is implementation-defined, so all draws go through the methods below.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t u64() { return engine_(); }

    // Unbiased uniform draw from {0, ..., n-1} by rejection.
    std::uint64_t below(std::uint64_t n) {
        if (n == 0) return 0;
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t v;
        do {
            v = engine_();
        } while (v >= limit);
        return v % n;
    }

    // Uniform in [0, 1) with 53 random bits.
    double real01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return real01() < p; }

    int bit() { return static_cast<int>(engine_() >> 63); }

    // Fisher-Yates; stable given the draw sequence above.
    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

    // Random subset of [n] of size k (distinct, sorted).
    std::vector<int> subset(int n, int k) {
        std::vector<int> idx(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) idx[static_cast<std::size_t>(i)] = i;
        shuffle(idx);
        idx.resize(static_cast<std::size_t>(k));
        std::sort(idx.begin(), idx.end());
        return idx;
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace cotforge
