// Counter-based deterministic random streams.
//
// Every random quantity in the library is a pure function of a 64-bit seed
// and a counter, so results are independent of evaluation order and safe to
// compute from any number of threads. The avalanche function is the standard
// splitmix64 finalizer; `at(seed, k)` is the (k+1)-th output of a splitmix64
// sequence started at `seed`, accessed without iterating.
#pragma once

#include <cmath>
#include <cstdint>

namespace ddtea::rng {

inline constexpr std::uint64_t kGoldenGamma = 0x9E3779B97F4A7C15ull;

/// splitmix64 finalizer (bijective 64-bit avalanche).
constexpr std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

/// k-th draw of the stream identified by `seed` (random access).
constexpr std::uint64_t at(std::uint64_t seed, std::uint64_t k) {
    return mix64(seed + kGoldenGamma * (k + 1));
}

/// Derive a sub-stream seed. combine(combine(master, a), b) is the documented
/// seed-mixing function used for (sweep point, repetition) derivation.
constexpr std::uint64_t combine(std::uint64_t seed, std::uint64_t word) {
    return mix64(seed + kGoldenGamma * (word + 1));
}

/// Map 64 random bits to a double in the open interval (0, 1).
constexpr double to_unit(std::uint64_t r) {
    return (static_cast<double>(r >> 11) + 0.5) * 0x1.0p-53;
}

/// Uniform draw in (0, 1) at stream position k.
constexpr double uniform(std::uint64_t seed, std::uint64_t k) {
    return to_unit(at(seed, k));
}

/// Standard normal draw at stream position k (Box-Muller; uses two
/// underlying uniforms per draw, so distinct k never share bits).
inline double gaussian(std::uint64_t seed, std::uint64_t k) {
    const double u1 = uniform(seed, 2 * k);
    const double u2 = uniform(seed, 2 * k + 1);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
}

}  // namespace ddtea::rng
