#include "rko/greedy.hpp"

#include <algorithm>
#include <chrono>
#include <limits>
#include <stdexcept>

#include "rko/decoder.hpp"
#include "rko/parallel.hpp"
#include "rko/rng.hpp"

namespace rko {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

}  // namespace

GreedyIndex::GreedyIndex(const Instance& inst) {
    // rows are sorted by (from, to), so each from group is contiguous
    inst.for_each_row([&](const CostRow& row) {
        const std::uint64_t from = inst.node_code(row.from);
        if (from_codes_.empty() || from_codes_.back() != from) {
            from_codes_.push_back(from);
            lists_.emplace_back();
        }
        lists_.back().emplace_back(row.cost, inst.node_code(row.to));
    });
    for (auto& list : lists_) std::sort(list.begin(), list.end());
}

const std::vector<std::pair<double, std::uint64_t>>* GreedyIndex::outgoing(
    std::uint64_t from_code) const {
    auto it =
        std::lower_bound(from_codes_.begin(), from_codes_.end(), from_code);
    if (it == from_codes_.end() || *it != from_code) return nullptr;
    return &lists_[static_cast<std::size_t>(it - from_codes_.begin())];
}

Tour greedy_tour(const Instance& inst, const GreedyIndex& index,
                 std::mt19937_64& rng) {
    const int n = inst.seam_count();
    const std::uint64_t combos =
        static_cast<std::uint64_t>(inst.dims().combos());
    std::vector<char> visited(static_cast<std::size_t>(n) + 1, 0);

    Tour tour;
    tour.nodes.reserve(static_cast<std::size_t>(n));
    // codes below `combos` belong to the home seam; real nodes follow
    std::uniform_int_distribution<std::uint64_t> pick(combos,
                                                      inst.node_count() - 1);
    std::uint64_t current = pick(rng);
    {
        Node first = inst.node_from_code(current);
        visited[static_cast<std::size_t>(first.seam)] = 1;
        tour.nodes.push_back(first);
    }

    for (int step = 1; step < n; ++step) {
        std::uint64_t next = 0;
        bool found = false;
        if (const auto* out = index.outgoing(current)) {
            for (const auto& [cost, to] : *out) {
                const int seam = static_cast<int>(to / combos);
                if (seam == 0) continue;  // edges back home never advance
                if (!visited[static_cast<std::size_t>(seam)]) {
                    next = to;
                    found = true;
                    break;
                }
            }
        }
        if (!found) {
            int seam = 1;
            while (visited[static_cast<std::size_t>(seam)]) ++seam;
            next = inst.node_code(Node{seam, 0, 0, 0, 0});
        }
        Node node = inst.node_from_code(next);
        visited[static_cast<std::size_t>(node.seam)] = 1;
        tour.nodes.push_back(node);
        current = next;
    }

    auto [cost, feasible] =
        tour_cost(tour.nodes, inst, CostMode::HomeAnchored);
    tour.total_cost = cost;
    tour.feasible = feasible;
    return tour;
}

namespace {

struct ShotData {
    std::vector<double> costs;
    std::vector<double> durations;
};

ShotData run_shots(const Instance& inst, const GreedyIndex& index,
                   const GreedyParams& params, int workers) {
    if (params.shots < 1)
        throw std::invalid_argument("greedy: shots must be positive");
    ShotData data;
    data.costs.resize(static_cast<std::size_t>(params.shots));
    data.durations.resize(static_cast<std::size_t>(params.shots));
    parallel_for(static_cast<std::size_t>(params.shots), workers,
                 [&](std::size_t k) {
                     auto start = Clock::now();
                     auto rng = make_rng(derive_seed(params.seed, k));
                     Tour t = greedy_tour(inst, index, rng);
                     data.costs[k] = t.total_cost;
                     data.durations[k] = seconds_since(start);
                 });
    return data;
}

Tour replay_shot(const Instance& inst, const GreedyIndex& index,
                 const GreedyParams& params, long shot) {
    auto rng =
        make_rng(derive_seed(params.seed, static_cast<std::uint64_t>(shot)));
    return greedy_tour(inst, index, rng);
}

}  // namespace

GreedyResult multi_shot_greedy(const Instance& inst,
                               const GreedyParams& params, int workers) {
    auto start = Clock::now();
    GreedyIndex index(inst);
    ShotData data = run_shots(inst, index, params, workers);

    GreedyResult result;
    result.shot_costs = std::move(data.costs);
    // improvement timestamps approximate a sequential run: cumulative sum
    // of per-shot durations
    double cum = 0.0;
    double best = std::numeric_limits<double>::infinity();
    for (long k = 0; k < params.shots; ++k) {
        const std::size_t ks = static_cast<std::size_t>(k);
        cum += data.durations[ks];
        if (result.shot_costs[ks] < best) {
            best = result.shot_costs[ks];
            result.best_shot = k;
            result.improvements.push_back({cum, best});
        }
    }
    result.best = replay_shot(inst, index, params, result.best_shot);
    result.wall_seconds = seconds_since(start);
    return result;
}

std::vector<Tour> greedy_pool(const Instance& inst, const GreedyParams& params,
                              std::size_t pool_size, int workers) {
    if (pool_size < 1)
        throw std::invalid_argument("greedy: pool size must be positive");
    GreedyIndex index(inst);
    ShotData data = run_shots(inst, index, params, workers);

    std::vector<std::pair<double, long>> order;
    order.reserve(data.costs.size());
    for (long k = 0; k < params.shots; ++k)
        order.emplace_back(data.costs[static_cast<std::size_t>(k)], k);
    const std::size_t keep = std::min(pool_size, order.size());
    std::partial_sort(order.begin(),
                      order.begin() + static_cast<std::ptrdiff_t>(keep),
                      order.end());

    std::vector<Tour> pool;
    pool.reserve(keep);
    for (std::size_t i = 0; i < keep; ++i)
        pool.push_back(replay_shot(inst, index, params, order[i].second));
    return pool;
}

}  // namespace rko
