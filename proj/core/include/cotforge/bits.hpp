#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cotforge/rng.hpp"

namespace cotforge {

// Token sequences and chains of thought are bit strings stored
// little-endian-in-time: index 0 is the first token. Negative indexing
// ("i-th from the end") is a view, provided by from_end().
using BitString = std::vector<std::uint8_t>;

inline bool is_bits(const BitString& v) {
    for (auto b : v)
        if (b > 1) return false;
    return true;
}

// i = 1 is the last token.
inline std::uint8_t from_end(const BitString& v, std::size_t i) {
    return v[v.size() - i];
}

inline BitString random_bits(std::size_t len, Rng& rng) {
    BitString v(len);
    for (auto& b : v) b = static_cast<std::uint8_t>(rng.bit());
    return v;
}

// Bits of `value`, lowest bit first, width `len`. Handy for exhaustive sweeps.
inline BitString bits_of(std::uint64_t value, std::size_t len) {
    BitString v(len);
    for (std::size_t i = 0; i < len; ++i) v[i] = static_cast<std::uint8_t>((value >> i) & 1u);
    return v;
}

inline std::string to_string(const BitString& v) {
    std::string s;
    s.reserve(v.size());
    for (auto b : v) s.push_back(b ? '1' : '0');
    return s;
}

inline BitString concat(const BitString& a, const BitString& b) {
    BitString r = a;
    r.insert(r.end(), b.begin(), b.end());
    return r;
}

}  // namespace cotforge
