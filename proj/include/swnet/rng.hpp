#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace swnet {

using Rng = std::mt19937_64;

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Named random streams; each realization draws every stream from its own seed.
enum class Stream : std::uint64_t {
    Disorder = 1,
    Shortcuts = 2,
    GateH0 = 3,
    GateH2 = 4,
    Noise = 5,
    Measurement = 6,
};

/**
 * Stable seed derivation: seed = mix(mix(mix(master) ^ stream) ^ k_1) ^ ...
 * Depends only on its arguments, so results do not depend on scheduling.
 */
inline std::uint64_t derive_seed(std::uint64_t master, Stream stream, std::initializer_list<std::uint64_t> keys)
{
    std::uint64_t h = mix64(master);
    h = mix64(h ^ static_cast<std::uint64_t>(stream));
    for (auto k : keys) h = mix64(h ^ k);
    return h;
}

} // namespace swnet
