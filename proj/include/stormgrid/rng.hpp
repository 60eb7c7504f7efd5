#pragma once

#include <cstdint>

namespace stormgrid::rng {

// Counter-based generator used for outage sampling. Every draw is a pure
// hash of (sample seed, component tag, component id, time step), so results
// are independent of iteration order and of how samples are scheduled
// across worker threads.
//
// Stream derivation:
//   h0 = mix(seed ^ TAG_CONST)
//   h  = mix(h0 ^ k_i ^ ODD_CONST * i)  folded over the key words
//   u  = (h >> 11) * 2^-53                       in [0, 1)
// with mix = SplitMix64's finalizer (Stafford variant 13).

inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

inline std::uint64_t keyed_hash(std::uint64_t seed, std::uint64_t k1, std::uint64_t k2 = 0,
                                std::uint64_t k3 = 0) {
    std::uint64_t h = mix64(seed ^ 0x5bf03635a1ce9d2full);
    h = mix64(h ^ k1);
    h = mix64(h ^ (k2 + 0x7f4a7c159e3779b9ull));
    h = mix64(h ^ (k3 + 0x2545f4914f6cdd1dull));
    return h;
}

inline double uniform01(std::uint64_t h) {
    return static_cast<double>(h >> 11) * 0x1.0p-53;
}

// One draw from the (seed, key) stream.
inline double uniform(std::uint64_t seed, std::uint64_t k1, std::uint64_t k2 = 0,
                      std::uint64_t k3 = 0) {
    return uniform01(keyed_hash(seed, k1, k2, k3));
}

// Component tags keep streams for different draw kinds disjoint.
inline constexpr std::uint64_t kTagBranchWind = 0x01;
inline constexpr std::uint64_t kTagSubstationFlood = 0x02;

} // namespace stormgrid::rng
