#ifndef RKO_WARMSTART_HPP
#define RKO_WARMSTART_HPP

#include <array>
#include <cstdint>
#include <random>
#include <vector>

#include "rko/chromosome.hpp"
#include "rko/instance.hpp"
#include "rko/tour.hpp"

namespace rko {

/// Per-seam feature values indexed by dense seam (0..n_seams-1), in block
/// order: direction, tool, config, position.
struct FeatureAssignment {
    std::array<std::vector<int>, 4> values;
};

/// Noise-free seam keys for a visit order: chop (0,1] into n equal chunks
/// and place the key of the j-th visited seam at the centre of chunk j, so
/// sorting the keys reproduces `perm` exactly.
std::vector<double> permutation_centers(const std::vector<std::size_t>& perm);

/// Chromosome that decodes back to exactly (perm, features): seam keys are
/// drawn uniformly inside their chunk, feature keys uniformly inside the
/// value's bin. All keys stay in (0,1].
Chromosome encode_warmstart(const std::vector<std::size_t>& perm,
                            const FeatureAssignment& features,
                            const Instance& inst, std::mt19937_64& rng);

/// Extract (perm, features) from a tour and encode it.
Chromosome encode_tour(const Tour& tour, const Instance& inst,
                       std::mt19937_64& rng);

/// Encode the `pool_size` given tours with independent noise streams.
std::vector<Chromosome> encode_pool(const std::vector<Tour>& tours,
                                    const Instance& inst, std::uint64_t seed);

}  // namespace rko

#endif
