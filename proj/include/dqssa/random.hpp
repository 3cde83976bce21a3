#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace dqssa {

using Rng = std::mt19937_64;

// SplitMix64 finalizer. Used to key independent streams off a master seed.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Stream key for (seed, c0, c1, ...). Distinct counters give unrelated keys.
inline std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> counters) {
    std::uint64_t key = mix64(seed);
    for (auto c : counters)
        key = mix64(key ^ mix64(c + 0x632be59bd9b4e019ULL));
    return key;
}

// Uniform [0, 1) with 53 bits from a counter-keyed hash.
constexpr double hash_uniform(std::uint64_t key, std::uint64_t counter) {
    return static_cast<double>(mix64(key ^ mix64(counter)) >> 11) * 0x1.0p-53;
}

inline double uniform01(Rng &rng) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }

} // namespace dqssa
