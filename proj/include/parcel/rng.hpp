#ifndef PARCEL_RNG_HPP
#define PARCEL_RNG_HPP

#include <cstdint>
#include <random>

namespace parcel {

// All randomness in the project flows through std::mt19937_64 seeded from a
// user-supplied 64-bit value. Sub-streams (per trial, per subject) are derived
// with splitmix64 so independent units can be sampled concurrently and still
// reproduce byte-for-byte.
using Rng = std::mt19937_64;

inline uint64_t splitmix64(uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// Deterministic sub-seed for stream `index` of master seed `seed`.
inline uint64_t derive_seed(uint64_t seed, uint64_t index) {
    return splitmix64(seed ^ splitmix64(index));
}

} // namespace parcel

#endif
