#pragma once

#include <cstdint>
#include <cmath>
#include <string_view>

namespace fusion {

// Portable deterministic random streams. Everything derives from one master
// seed via labeled hashing, so any subcomponent can be re-run in isolation
// (and in parallel) with identical output. The platform std::mt19937 /
// std::normal_distribution are never used: their sequences are not pinned
// by the standard.
//
// Generator: xoshiro256++ (Blackman & Vigna), state seeded via splitmix64.

inline uint64_t splitmix64_next(uint64_t& state) {
    uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline uint64_t fnv1a64(std::string_view s) {
    uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

// Labeled seed derivation: mixes the label hash into the master seed.
inline uint64_t derive_seed(uint64_t master, std::string_view label) {
    uint64_t s = master ^ fnv1a64(label);
    return splitmix64_next(s);
}

inline uint64_t derive_seed(uint64_t master, std::string_view label, uint64_t index) {
    uint64_t s = master ^ fnv1a64(label);
    s = splitmix64_next(s);
    s ^= 0x9e3779b97f4a7c15ULL * (index + 1);
    return splitmix64_next(s);
}

class RandomStream {
public:
    explicit RandomStream(uint64_t seed) {
        uint64_t sm = seed;
        for (auto& word : state_) word = splitmix64_next(sm);
    }

    uint64_t next_u64() {
        const uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
        const uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    // Uniform in [0, 1) with 53-bit resolution.
    double u01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform in (0, 1]; safe as a log() argument.
    double u01_open() {
        return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
    }

    // Unbiased integer in [0, bound) via rejection.
    uint64_t uniform_int(uint64_t bound) {
        const uint64_t threshold = (0 - bound) % bound;
        for (;;) {
            uint64_t x = next_u64();
            if (x >= threshold) return x % bound;
        }
    }

    // Standard normal via Box-Muller (two uniforms per draw, no cached spare).
    double normal() {
        double u1 = u01_open();
        double u2 = u01();
        return std::sqrt(-2.0 * std::log(u1)) *
               std::cos(2.0 * 3.141592653589793238462643383279502884 * u2);
    }

    double normal(double mean, double sd) { return mean + sd * normal(); }

    bool bernoulli(double p) { return u01() < p; }

private:
    static uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
    uint64_t state_[4];
};

} // namespace fusion
