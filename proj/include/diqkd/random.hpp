#pragma once

#include <cstdint>
#include <random>

namespace diqkd {

// Uniform double in [0, 1) from the top 53 bits of one draw. Avoids the
// implementation-defined layout of std::uniform_real_distribution so that
// outputs are reproducible across standard libraries.
inline double uniform_double(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Unbiased integer in [0, n) by rejection.
inline std::uint64_t uniform_index(std::mt19937_64& rng, std::uint64_t n) {
    const std::uint64_t threshold = (~n + 1) % n;  // 2^64 mod n
    for (;;) {
        const std::uint64_t x = rng();
        if (x >= threshold) return x % n;
    }
}

// SplitMix64 finalizer; used to derive independent seeds from (root, tag, index)
// so that per-round streams can be constructed in O(1) and in parallel while
// reproducing the serial draw sequence exactly.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t root, std::uint64_t tag, std::uint64_t index) {
    return mix64(mix64(root ^ (tag * 0xD1342543DE82EF95ULL)) + index);
}

inline std::mt19937_64 derive_stream(std::uint64_t root, std::uint64_t tag, std::uint64_t index) {
    return std::mt19937_64(derive_seed(root, tag, index));
}

}  // namespace diqkd
