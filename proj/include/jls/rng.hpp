#pragma once

#include <cmath>
#include <cstdint>
#include <span>

// Deterministic, platform-independent random streams. Replicate k of a run
// seeded with `master` always draws from Xoshiro256pp(mix64(master, k)),
// so results do not depend on worker count or scheduling. std::<random>
// distributions are implementation-defined and deliberately not used.

namespace jls::rng {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Fixed mixing of (master seed, stream index) into a substream seed.
inline std::uint64_t mix64(std::uint64_t master, std::uint64_t stream) {
    std::uint64_t s = master ^ (stream + 0x9e3779b97f4a7c15ULL) * 0xff51afd7ed558ccdULL;
    return splitmix64(s);
}

class Xoshiro256pp {
  public:
    explicit Xoshiro256pp(std::uint64_t seed) {
        std::uint64_t sm = seed;
        for (auto& word : s_) word = splitmix64(sm);
    }

    std::uint64_t next() {
        const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

  private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }
    std::uint64_t s_[4];
};

// Uniform double in [0, 1) with 53 random bits.
inline double uniform01(Xoshiro256pp& rng) {
    return static_cast<double>(rng.next() >> 11) * 0x1.0p-53;
}

// Unbiased integer in [0, n) by rejection.
inline std::uint64_t uniform_below(Xoshiro256pp& rng, std::uint64_t n) {
    const std::uint64_t threshold = (0 - n) % n;
    for (;;) {
        const std::uint64_t r = rng.next();
        if (r >= threshold) return r % n;
    }
}

// Standard normal via Marsaglia's polar method; generates a pair and keeps
// one per call so single draws stay stateless.
inline double normal(Xoshiro256pp& rng) {
    for (;;) {
        const double u = 2.0 * uniform01(rng) - 1.0;
        const double v = 2.0 * uniform01(rng) - 1.0;
        const double s = u * u + v * v;
        if (s > 0.0 && s < 1.0)
            return u * std::sqrt(-2.0 * std::log(s) / s);
    }
}

// Fills a buffer using both members of each polar pair.
inline void fill_normal(std::span<double> out, Xoshiro256pp& rng) {
    std::size_t i = 0;
    while (i + 1 < out.size()) {
        double u, v, s;
        do {
            u = 2.0 * uniform01(rng) - 1.0;
            v = 2.0 * uniform01(rng) - 1.0;
            s = u * u + v * v;
        } while (s <= 0.0 || s >= 1.0);
        const double m = std::sqrt(-2.0 * std::log(s) / s);
        out[i++] = u * m;
        out[i++] = v * m;
    }
    if (i < out.size()) out[i] = normal(rng);
}

// In-place Fisher-Yates shuffle.
template <typename T>
void shuffle(std::span<T> values, Xoshiro256pp& rng) {
    for (std::size_t i = values.size(); i > 1; --i) {
        const std::size_t j = static_cast<std::size_t>(uniform_below(rng, i));
        std::swap(values[i - 1], values[j]);
    }
}

}  // namespace jls::rng
