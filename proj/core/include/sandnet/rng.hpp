#pragma once

#include <cstdint>

namespace sandnet {

/// Deterministic 64-bit generator (splitmix64). Scenario replays must be
/// byte-identical across platforms, so no <random> distributions are used
/// anywhere in the library.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        state_ += 0x9e3779b97f4a7c15ull;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    /// Unbiased draw from [0, bound). bound must be nonzero.
    std::uint64_t below(std::uint64_t bound) {
        const std::uint64_t limit = ~0ull - (~0ull % bound);
        std::uint64_t value = next();
        while (value >= limit) value = next();
        return value % bound;
    }

private:
    std::uint64_t state_;
};

/// Derives an independent stream seed, e.g. one per scenario step.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
    Rng rng(seed ^ (stream * 0xd1b54a32d192ed03ull + 0x2545f4914f6cdd1dull));
    return rng.next();
}

} // namespace sandnet
