#pragma once

#include <cmath>
#include <cstdint>

namespace hdasc {

// splitmix64, used to derive independent stream seeds from a root seed.
inline uint64_t mix_seed(uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

inline uint64_t derive_seed(uint64_t root, uint64_t a, uint64_t b = 0, uint64_t c = 0) {
    uint64_t s = mix_seed(root);
    s = mix_seed(s ^ mix_seed(a + 0x5851f42d4c957f2dull));
    s = mix_seed(s ^ mix_seed(b + 0x14057b7ef767814full));
    s = mix_seed(s ^ mix_seed(c + 0x2545f4914f6cdd1dull));
    return s;
}

// xoshiro256** generator with explicit uniform/normal draws. All experiments
// derive their randomness from this class, never from std:: distributions,
// so a seed reproduces the identical stream on every platform.
class Rng {
public:
    explicit Rng(uint64_t seed = 0x853c49e6748fea9bull) {
        uint64_t s = seed;
        for (auto& w : state_) {
            s = mix_seed(s);
            w = s;
        }
        have_cached_normal_ = false;
    }

    uint64_t next_u64() {
        const uint64_t result = rotl(state_[1] * 5, 7) * 9;
        const uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    // Uniform in [0, 1).
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Box-Muller; caches the second variate.
    double normal() {
        if (have_cached_normal_) {
            have_cached_normal_ = false;
            return cached_normal_;
        }
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586476925286766559 * u2;
        cached_normal_ = r * std::sin(a);
        have_cached_normal_ = true;
        return r * std::cos(a);
    }

    double normal(double mean, double stddev) { return mean + stddev * normal(); }

    // Uniform integer in [0, n).
    uint64_t next_below(uint64_t n) {
        // Rejection-free modulo is fine here; n is tiny relative to 2^64.
        return next_u64() % n;
    }

private:
    static uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    uint64_t state_[4];
    bool have_cached_normal_;
    double cached_normal_ = 0.0;
};

}  // namespace hdasc
