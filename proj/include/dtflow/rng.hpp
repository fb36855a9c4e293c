#pragma once

#include <cstdint>

namespace dtflow {

// splitmix64 with the standard constants. Fixed here so that perturbation
// streams are bit-reproducible across platforms and languages.
struct SplitMix64 {
    uint64_t state;

    explicit SplitMix64(uint64_t seed) : state(seed) {}

    uint64_t next() {
        uint64_t z = (state += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    // uniform in [0, bound)
    uint64_t next_below(uint64_t bound) { return next() % bound; }
};

}  // namespace dtflow
