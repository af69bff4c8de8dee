#ifndef RKO_RNG_HPP
#define RKO_RNG_HPP

#include <cstdint>
#include <random>

#include "rko/chromosome.hpp"

namespace rko {

// SplitMix64 step; used to derive independent stream seeds from one seed.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    return splitmix64(splitmix64(seed) ^ splitmix64(stream));
}

inline std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t stream = 0) {
    return std::mt19937_64(derive_seed(seed, stream));
}

/// Uniform key in (0,1].
inline double random_key(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    return 1.0 - u(rng);
}

inline Chromosome random_chromosome(std::size_t len, std::mt19937_64& rng) {
    Chromosome c(len);
    for (double& k : c) k = random_key(rng);
    return c;
}

}  // namespace rko

#endif
