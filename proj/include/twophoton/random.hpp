#pragma once

#include <cstdint>
#include <random>

namespace twophoton {

// SplitMix64 finalizer; used to derive independent stream seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Seed for chunk `chunk` of stream `stream` under a user seed.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream,
                                    std::uint64_t chunk) noexcept {
    return splitmix64(splitmix64(splitmix64(seed) ^ stream) ^ chunk);
}

// Uniform double in [0, 1) from the top 53 bits. Spelled out rather than using
// std::uniform_real_distribution so streams are identical across standard
// library implementations.
inline double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace twophoton
