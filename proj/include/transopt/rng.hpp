#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>

namespace transopt::rng {

// One splitmix64 step; used to spread seeds, not as a generator.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Seed for an index-addressed substream (e.g. one per scenario). Substream k
// depends only on (seed, k), so drawing more scenarios later never disturbs
// the ones already defined.
inline std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t stream) {
    return splitmix64(seed ^ splitmix64(stream));
}

// Uniform double in [0, 1) with 53 random bits. mt19937_64 output is fixed by
// the standard; this mapping replaces the implementation-defined
// std::uniform_real_distribution so streams reproduce everywhere.
inline double uniform01(std::mt19937_64& gen) {
    return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

inline double uniform_real(std::mt19937_64& gen, double lo, double hi) {
    return lo + (hi - lo) * uniform01(gen);
}

// Unbiased uniform index in [0, n) by rejection.
inline std::size_t uniform_index(std::mt19937_64& gen, std::size_t n) {
    const std::uint64_t max = std::numeric_limits<std::uint64_t>::max();
    const std::uint64_t limit = max - max % static_cast<std::uint64_t>(n);
    std::uint64_t x;
    do {
        x = gen();
    } while (x >= limit);
    return static_cast<std::size_t>(x % static_cast<std::uint64_t>(n));
}

// Standard normal via Box-Muller (cosine branch). Exactly two raw draws per
// variate keeps the stream layout fixed; std::normal_distribution would not
// reproduce across standard libraries.
inline double standard_normal(std::mt19937_64& gen) {
    constexpr double two_pi = 6.283185307179586476925286766559;
    const double u = (static_cast<double>(gen() >> 11) + 1.0) * 0x1.0p-53;  // (0, 1]
    const double v = uniform01(gen);
    return std::sqrt(-2.0 * std::log(u)) * std::cos(two_pi * v);
}

}  // namespace transopt::rng
