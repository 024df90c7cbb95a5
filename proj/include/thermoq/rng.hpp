#pragma once

#include <cmath>
#include <cstdint>

// Counter-based splittable RNG: every (master_seed, stream_index) pair names
// an independent SplitMix64 stream, so parallel shot batches draw identical
// samples no matter how work is scheduled.

namespace thermoq {

struct RngSeed {
    std::uint64_t master_seed = 0;
    std::uint64_t stream_index = 0;
};

// SplitMix64 output finalizer; also used to hash seed components together.
inline std::uint64_t mix64(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xbf58476d1ce4e5b9ULL;
    z ^= z >> 27;
    z *= 0x94d049bb133111ebULL;
    z ^= z >> 31;
    return z;
}

class SplitMix64 {
  public:
    explicit SplitMix64(RngSeed seed)
        : state_(mix64(seed.master_seed ^
                       mix64(seed.stream_index ^ 0x9e3779b97f4a7c15ULL))) {}

    std::uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = state_;
        z ^= z >> 30;
        z *= 0xbf58476d1ce4e5b9ULL;
        z ^= z >> 27;
        z *= 0x94d049bb133111ebULL;
        z ^= z >> 31;
        return z;
    }

    // Uniform on [0, 1) with 53 random bits.
    double uniform() { return double(next_u64() >> 11) * 0x1.0p-53; }

    // Standard normal via Box-Muller (cosine branch; two uniforms per draw —
    // the fixed consumption rate keeps streams easy to reason about).
    double normal() {
        double u1 = uniform();
        double u2 = uniform();
        double r = std::sqrt(-2.0 * std::log1p(-u1));  // u1 < 1 always
        return r * std::cos(6.28318530717958647692528676655900577 * u2);
    }

  private:
    std::uint64_t state_;
};

// Substream for block b of the stream named by seed: block index hashed into
// the stream index, so blocks are independent and order-free.
inline RngSeed block_seed(RngSeed seed, std::uint64_t block) {
    return {seed.master_seed, mix64(seed.stream_index) ^ (block + 1)};
}

// Geometric (Bose-Einstein) sampler, P(n) = n_bar^n / (1+n_bar)^(n+1),
// by inverse CDF on one uniform draw.
inline long sample_bose_einstein(double n_bar, SplitMix64& rng) {
    if (n_bar <= 0.0) {
        rng.uniform();  // keep stream consumption independent of n_bar
        return 0;
    }
    double u = rng.uniform();
    // CDF(n) = 1 - r^(n+1) with r = n_bar/(1+n_bar):
    // n = floor(log(1-u)/log(r)).
    double r = n_bar / (1.0 + n_bar);
    return long(std::floor(std::log1p(-u) / std::log(r)));
}

// Single-draw form matching the library-level operation signature.
inline long sample_bose_einstein(double n_bar, RngSeed seed) {
    SplitMix64 rng(seed);
    return sample_bose_einstein(n_bar, rng);
}

}  // namespace thermoq
