#pragma once

#include <cstdint>
#include <string_view>
#include <utility>

namespace cprep {

struct Hash128 {
    std::uint64_t lo;
    std::uint64_t hi;
};

// MurmurHash3 x64 128-bit, seeded with a 64-bit key in both lanes.
// Byte-order independent by construction (reads via shifts), so values
// are identical on every platform.
Hash128 murmur3_128(std::string_view data, std::uint64_t seed);

}  // namespace cprep
