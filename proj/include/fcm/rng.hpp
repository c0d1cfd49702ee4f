#pragma once
#include <cmath>
#include <cstdint>
#include <random>

namespace fcm {

// Deterministic random stream for one simulation.
//
// The generator is std::mt19937_64 seeded directly with the 64-bit seed; its
// output sequence is fixed by the C++ standard, so a (config, seed) pair gives
// the same raw stream on every platform. Distribution mappings are implemented
// here rather than with std::*_distribution (whose algorithms are
// implementation-defined):
//   uniform():     next_u64() >> 11, scaled by 2^-53, in [0, 1)
//   normal():      Box-Muller, exactly two uniform() draws per call, no caching
//   bernoulli(p):  one uniform() draw, true iff u < p
//   uniform_int(n): floor(uniform() * n), one draw
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next_u64() { return gen_(); }

    double uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double normal() {
        double u1 = uniform();
        double u2 = uniform();
        if (u1 <= 0.0) u1 = 0x1.0p-53;
        constexpr double two_pi = 6.283185307179586476925286766559;
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(two_pi * u2);
    }

    bool bernoulli(double p) { return uniform() < p; }

    // Uniform index in [0, n). n must be >= 1.
    int uniform_int(int n) {
        int k = static_cast<int>(uniform() * static_cast<double>(n));
        return k >= n ? n - 1 : k;
    }

    // splitmix64 output mixing; used for seed derivation.
    static std::uint64_t splitmix64(std::uint64_t& state) {
        state += 0x9E3779B97F4A7C15ull;
        std::uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    // Seed for the index-th member of an ensemble: the (index+1)-th output of
    // a splitmix64 sequence started at the master seed.
    static std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
        std::uint64_t state = master;
        std::uint64_t out = 0;
        for (std::uint64_t i = 0; i <= index; ++i) out = splitmix64(state);
        return out;
    }

private:
    std::mt19937_64 gen_;
};

} // namespace fcm
