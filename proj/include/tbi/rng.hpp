#pragma once

#include <cstdint>

namespace tbi {

// splitmix64 stream seeded directly with a user-facing 64-bit seed.
// Chosen over std::mt19937 so that identical seeds give identical streams
// on every platform and standard library.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0,1) built from the high 53 bits.
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform in [0, bound); bound must be nonzero.
    std::uint64_t next_below(std::uint64_t bound) {
        return static_cast<std::uint64_t>(
            (static_cast<__uint128_t>(next_u64()) * bound) >> 64);
    }

    // Rademacher +-1 from the top bit.
    int next_sign() { return (next_u64() >> 63) ? 1 : -1; }

private:
    std::uint64_t state_;
};

}  // namespace tbi
