#pragma once

#include <cstdint>

namespace afl {

// Deterministic 64-bit PRNG (splitmix64). All randomness in the project flows
// through this generator so that runs are reproducible from a single seed on
// any platform. Per-task streams are derived with derive(), which mixes the
// master seed with a stream index through one splitmix64 round; this is the
// documented seed-splitting rule used by the sweep harness.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, bound) via rejection; bound must be nonzero.
    std::uint64_t next_below(std::uint64_t bound) {
        const std::uint64_t limit = ~0ULL - (~0ULL % bound);
        std::uint64_t v;
        do {
            v = next_u64();
        } while (v >= limit);
        return v % bound;
    }

    // Signed uniform in [-magnitude, magnitude].
    long long next_signed(std::uint64_t magnitude) {
        return static_cast<long long>(next_below(2 * magnitude + 1)) -
               static_cast<long long>(magnitude);
    }

    bool next_bool() { return (next_u64() & 1) != 0; }

    static std::uint64_t derive(std::uint64_t master, std::uint64_t index) {
        Rng mix(master ^ (0x9e3779b97f4a7c15ULL * (index + 1)));
        return mix.next_u64();
    }

private:
    std::uint64_t state_;
};

} // namespace afl
