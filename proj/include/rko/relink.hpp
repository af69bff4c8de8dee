#ifndef RKO_RELINK_HPP
#define RKO_RELINK_HPP

#include <span>
#include <vector>

#include "rko/chromosome.hpp"
#include "rko/decoder.hpp"

namespace rko {

struct RelinkResult {
    double alpha = 0.0;
    Chromosome chromosome;
    Tour tour;
};

/// Uniform grid over [0,1] with `points` >= 2 entries, endpoints included.
std::vector<double> alpha_grid(std::size_t points);

/// Decode the convex combinations (1-alpha)*a + alpha*b over the grid and
/// return the cheapest point (lowest alpha on ties). The grid must contain
/// 0 and 1, so the result never loses to both endpoints. Interpolated keys
/// are clamped into (0,1].
RelinkResult path_relink(const Chromosome& a, const Chromosome& b,
                         std::span<const double> alphas, const Instance& inst,
                         CostMode mode = CostMode::HomeAnchored);

}  // namespace rko

#endif
