#pragma once

#include <cstdint>

namespace lanet {

/// Deterministic 64-bit generator (SplitMix64). Used everywhere randomness is
/// needed so results are identical across platforms and standard-library
/// versions; std::uniform_int_distribution is not reproducible across
/// implementations.
class Rng {
public:
    explicit Rng(std::uint64_t state) : state_(state) {}

    std::uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Unbiased draw in [0, bound) via rejection sampling. bound must be > 0.
    std::uint64_t next_below(std::uint64_t bound) {
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
        std::uint64_t r;
        do {
            r = next_u64();
        } while (r >= limit);
        return r % bound;
    }

    /// Uniform double in [0, 1) with 53 bits of precision.
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    bool next_bernoulli(double p) { return next_double() < p; }

private:
    std::uint64_t state_;
};

/// SplitMix64 finalizer, usable as a standalone hash of a 64-bit value.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Independent stream derived solely from (seed, stream index). Two calls with
/// the same arguments yield generators producing identical sequences; distinct
/// indices give statistically independent streams. Execution order and thread
/// scheduling therefore cannot influence any seeded computation.
inline Rng derive_stream(std::uint64_t seed, std::uint64_t stream) {
    return Rng(mix64(mix64(seed) ^ mix64(stream + 0x2545F4914F6CDD1DULL)));
}

/// Stable 64-bit FNV-1a hash; anonymizes student identifiers.
inline std::uint64_t fnv1a64(const char* data, std::size_t size) {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (std::size_t i = 0; i < size; ++i) {
        h ^= static_cast<unsigned char>(data[i]);
        h *= 0x100000001B3ULL;
    }
    return h;
}

}  // namespace lanet
