#pragma once

#include <cstdint>
#include <random>

namespace truncue {

// Substream s of a master seed is the s-th output of the SplitMix64 sequence
// started at that seed. Experiments number every draw globally and seed the
// draw's engine with substream_seed(master, draw_index), which makes results
// independent of how draws are distributed over workers.
inline std::uint64_t substream_seed(std::uint64_t master, std::uint64_t counter) {
    std::uint64_t z = master + 0x9E3779B97F4A7C15ULL * (counter + 1ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

inline std::mt19937_64 substream_engine(std::uint64_t master, std::uint64_t counter) {
    return std::mt19937_64(substream_seed(master, counter));
}

}  // namespace truncue
