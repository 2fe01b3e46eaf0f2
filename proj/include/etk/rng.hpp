#pragma once

#include <cstdint>
#include <limits>
#include <random>
#include <vector>

namespace etk {

// splitmix64 finalizer. Used to spread user seeds and to derive independent
// substreams from (seed, index) pairs so batch-parallel generation stays
// schedule-independent.
constexpr std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

constexpr std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t index) {
    return mix64(mix64(seed) ^ mix64(index + 1));
}

inline std::mt19937_64 make_rng(std::uint64_t seed) {
    return std::mt19937_64(mix64(seed));
}

// Unbiased draw in [0, k). Rejection sampling instead of the
// implementation-defined std::uniform_int_distribution; mt19937_64 output is
// specified by the standard, so sequences are reproducible everywhere.
inline std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t k) {
    const std::uint64_t max = std::numeric_limits<std::uint64_t>::max();
    const std::uint64_t limit = max - max % k;
    std::uint64_t x = rng();
    while (x >= limit) {
        x = rng();
    }
    return x % k;
}

// Uniform double in [0, 1) with 53 random bits.
inline double uniform_unit(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Fisher-Yates permutation of 0..count-1.
inline std::vector<std::size_t> shuffled_indices(std::size_t count, std::mt19937_64& rng) {
    std::vector<std::size_t> idx(count);
    for (std::size_t i = 0; i < count; ++i) {
        idx[i] = i;
    }
    for (std::size_t i = count; i > 1; --i) {
        const std::size_t j = static_cast<std::size_t>(uniform_below(rng, i));
        std::swap(idx[i - 1], idx[j]);
    }
    return idx;
}

} // namespace etk
