#pragma once

#include <cstdint>
#include <random>

namespace cprep {

// Reproducible random source. std::mt19937_64 is fully specified by the
// standard, so the raw stream is identical on every platform; the bounded
// draw below is our own rejection sampler because the standard library's
// distributions are implementation-defined.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next() { return gen_(); }

    // Uniform draw from [0, n). Unbiased via rejection.
    std::uint64_t below(std::uint64_t n) {
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t x;
        do {
            x = gen_();
        } while (x >= limit);
        return x % n;
    }

  private:
    std::mt19937_64 gen_;
};

// splitmix64 finalizer; used to derive per-index sort keys.
constexpr std::uint64_t mix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

constexpr std::uint64_t keyed_index_hash(std::uint64_t seed, std::uint64_t index) {
    return mix64(mix64(seed) ^ mix64(index));
}

}  // namespace cprep
