#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>

namespace qpso {

/// Engine used for every stochastic decision in the library.
///
/// std::mt19937_64 has a fully specified output sequence, so traces are
/// reproducible across standard library implementations. The distributions
/// below are written out by hand for the same reason: std::uniform_real_distribution
/// is implementation-defined.
using Engine = std::mt19937_64;

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

constexpr std::uint64_t fnv1a(std::string_view s) noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : s) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

/// Seed of the independent stream for (master seed, algorithm tag, run index).
/// Depends only on its arguments, never on execution order.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::string_view tag, std::uint64_t run) noexcept {
    return splitmix64(splitmix64(master) ^ splitmix64(fnv1a(tag) + 0x632be59bd9b4e019ULL) ^
                      splitmix64(run * 0xd1b54a32d192ed03ULL + 1));
}

inline Engine make_engine(std::uint64_t seed) { return Engine{seed}; }

/// Uniform in [0, 1) with 53 random bits.
inline double uniform01(Engine& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

/// Uniform in the open interval (0, 1); safe for ln(1/u).
inline double uniform_open01(Engine& rng) { return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53; }

inline double uniform(Engine& rng, double lo, double hi) { return lo + (hi - lo) * uniform01(rng); }

/// Fair coin, true with probability 1/2.
inline bool coin(Engine& rng) { return uniform01(rng) < 0.5; }

/// Standard normal via Box-Muller (one value per call).
inline double standard_normal(Engine& rng) {
    const double u1 = uniform_open01(rng);
    const double u2 = uniform01(rng);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
}

} // namespace qpso
