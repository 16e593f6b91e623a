#pragma once

#include <cstdint>
#include <limits>

namespace cqmac {

// SplitMix64 (Steele, Lea, Flood 2014). Chosen as the project PRNG because
// the sequence is fully specified by the seed and identical on every
// platform, which the reproducibility contract of the CLI depends on.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform double in [0, 1) with 53 random bits.
    double next_double() {
        return static_cast<double>(next() >> 11) * 0x1.0p-53;
    }

    // Uniform integer in [0, n). Rejection keeps it unbiased and the
    // rejection loop is itself deterministic given the seed.
    std::uint64_t next_below(std::uint64_t n) {
        if (n == 0) return 0;
        const std::uint64_t limit =
            std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % n;
        std::uint64_t v = next();
        while (v >= limit) v = next();
        return v % n;
    }

    // Symmetric uniform in [-1, 1].
    double next_symmetric() { return 2.0 * next_double() - 1.0; }

    // Independent child generator; parent and child streams do not overlap
    // in practice because the child is reseeded through the full mix.
    SplitMix64 split() { return SplitMix64(next() ^ 0x6a09e667f3bcc909ULL); }

private:
    std::uint64_t state_;
};

} // namespace cqmac
