#pragma once

// Deterministic RNG used everywhere randomness is called for.  splitmix64
// plus an unbiased bounded draw: unlike std::uniform_int_distribution the
// output is pinned down by the standard of *this file*, so identical seeds
// give identical artifacts on every platform and toolchain.

#include <cmath>
#include <cstdint>

namespace hlink {

class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, bound); bound > 0.  Rejection sampling keeps it exact.
    std::uint64_t next_below(std::uint64_t bound) {
        std::uint64_t threshold = (0 - bound) % bound;
        while (true) {
            std::uint64_t r = next_u64();
            if (r >= threshold) return r % bound;
        }
    }

    int next_int(int bound) { return int(next_below(std::uint64_t(bound))); }

    // Uniform double in [0, 1) with 53 random bits.
    double next_double() { return double(next_u64() >> 11) * 0x1.0p-53; }

    bool next_bool(double p) { return next_double() < p; }

    // Knuth's product method; fine for the small means used here.
    int next_poisson(double mean) {
        double limit = std::exp(-mean);
        double prod = 1.0;
        int k = 0;
        while (true) {
            prod *= next_double();
            if (prod <= limit) return k;
            ++k;
        }
    }

    // Independent stream for sub-tasks (retry rounds, per-cell benches).
    Rng fork(std::uint64_t salt) {
        std::uint64_t s = state_ ^ (0xd1342543de82ef95ULL * (salt + 1));
        Rng r(s);
        r.next_u64();
        return r;
    }

private:
    std::uint64_t state_;
};

}  // namespace hlink
