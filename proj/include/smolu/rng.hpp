#pragma once

#include <cstdint>

// Counter-based pseudo-random numbers (splitmix64). All randomness in the
// toolkit derives from a single 64-bit seed through this generator, so runs
// are reproducible across platforms and thread counts.

namespace smolu {

struct Rng {
    std::uint64_t state;

    explicit Rng(std::uint64_t seed) : state(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // uniform in [0, 1)
    double next_unit() { return double(next_u64() >> 11) * 0x1.0p-53; }

    // uniform in [-1, 1)
    double next_sym() { return 2.0 * next_unit() - 1.0; }

    // decorrelated stream for substream k of the same seed
    static Rng stream(std::uint64_t seed, std::uint64_t k) {
        Rng r(seed ^ (0xd1342543de82ef95ull * (k + 1)));
        r.next_u64();
        return r;
    }
};

} // namespace smolu
