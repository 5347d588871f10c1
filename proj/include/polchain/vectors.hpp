#pragma once

#include <string>
#include <vector>

#include "polchain/crypto.hpp"

namespace polchain {

struct GoldenVector {
    std::string name;
    Bytes bytes;
};

/// Fixed-input encodings and digests for cross-implementation conformance.
/// Keys come from the seeds 0x01..01, 0x02..02 and 0x03..03.
std::vector<GoldenVector> golden_vectors();

}  // namespace polchain
