#pragma once

#include <optional>
#include <vector>

#include "cotforge/bits.hpp"

namespace cotforge {

// One supervised example: input x, the revealed chain of thought z, and,
// depending on the collection mode, the contributing thinker's identity
// and/or the batch index of the index-CoT process.
struct CotExample {
    BitString x;
    BitString z;
    std::optional<int> identity;
    std::optional<int> index;
};

using CotDataset = std::vector<CotExample>;

// End-to-end supervision: final labels only.
struct E2eExample {
    BitString x;
    int y = 0;
};

using E2eDataset = std::vector<E2eExample>;

}  // namespace cotforge
