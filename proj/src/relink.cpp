#include "rko/relink.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "rko/instance.hpp"

namespace rko {

std::vector<double> alpha_grid(std::size_t points) {
    if (points < 2)
        throw std::invalid_argument("alpha_grid: need at least 2 points");
    std::vector<double> grid(points);
    for (std::size_t i = 0; i < points; ++i)
        grid[i] = static_cast<double>(i) / static_cast<double>(points - 1);
    grid.front() = 0.0;
    grid.back() = 1.0;
    return grid;
}

RelinkResult path_relink(const Chromosome& a, const Chromosome& b,
                         std::span<const double> alphas, const Instance& inst,
                         CostMode mode) {
    if (a.size() != b.size())
        throw std::invalid_argument("path_relink: endpoint lengths differ");
    if (a.size() != 5 * static_cast<std::size_t>(inst.seam_count()))
        throw std::invalid_argument(
            "path_relink: chromosome length does not match the instance");
    validate_chromosome(a);
    validate_chromosome(b);
    if (alphas.empty())
        throw std::invalid_argument("path_relink: empty alpha grid");

    std::vector<double> grid(alphas.begin(), alphas.end());
    std::sort(grid.begin(), grid.end());
    for (double alpha : grid)
        if (!(alpha >= 0.0 && alpha <= 1.0))
            throw std::invalid_argument(
                "path_relink: alpha values must lie in [0,1]");
    if (grid.front() != 0.0 || grid.back() != 1.0)
        throw std::invalid_argument(
            "path_relink: the grid must contain both endpoints 0 and 1");

    RelinkResult best;
    bool have_best = false;
    Chromosome x(a.size());
    for (double alpha : grid) {
        for (std::size_t i = 0; i < a.size(); ++i)
            x[i] = clamp_key((1.0 - alpha) * a[i] + alpha * b[i]);
        Tour t = decode(x, inst, mode);
        // strict improvement only, so ties keep the lowest alpha
        if (!have_best || t.total_cost < best.tour.total_cost) {
            best.alpha = alpha;
            best.chromosome = x;
            best.tour = std::move(t);
            have_best = true;
        }
    }
    return best;
}

}  // namespace rko
