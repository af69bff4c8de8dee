#ifndef RKO_GREEDY_HPP
#define RKO_GREEDY_HPP

#include <cstdint>
#include <random>
#include <vector>

#include "rko/brkga.hpp"  // ImprovementEvent
#include "rko/instance.hpp"
#include "rko/tour.hpp"

namespace rko {

/// Sorted outgoing adjacency (cost ascending, then node order) for every
/// node that has listed edges. Built once, shared by all shots.
class GreedyIndex {
  public:
    explicit GreedyIndex(const Instance& inst);
    const std::vector<std::pair<double, std::uint64_t>>* outgoing(
        std::uint64_t from_code) const;

  private:
    std::vector<std::uint64_t> from_codes_;  // sorted
    std::vector<std::vector<std::pair<double, std::uint64_t>>> lists_;
};

/// Nearest-feasible-neighbour tour: start at home, pick a uniformly random
/// first node, then repeatedly take the cheapest listed edge into a not yet
/// visited seam; ties break on lexicographic node order. When no listed
/// edge leads to an unvisited seam the lexicographically smallest node of
/// the smallest unvisited seam is taken at padding cost.
Tour greedy_tour(const Instance& inst, const GreedyIndex& index,
                 std::mt19937_64& rng);

struct GreedyParams {
    long shots = 10000;
    std::uint64_t seed = 0;
};

struct GreedyResult {
    Tour best;
    long best_shot = 0;
    std::vector<double> shot_costs;  // histogram source, by shot index
    std::vector<ImprovementEvent> improvements;
    double wall_seconds = 0.0;
};

/// Independent restarts; shot k uses the RNG stream derived from
/// (seed, k), so results do not depend on the worker count.
GreedyResult multi_shot_greedy(const Instance& inst,
                               const GreedyParams& params, int workers = 1);

/// The pool_size cheapest shot tours (distinct shots, cost then shot-index
/// order), for warmstart encoding.
std::vector<Tour> greedy_pool(const Instance& inst, const GreedyParams& params,
                              std::size_t pool_size, int workers = 1);

}  // namespace rko

#endif
