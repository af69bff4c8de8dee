#include "rko/decoder.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace rko {

std::vector<std::size_t> decode_permutation(std::span<const double> keys) {
    std::vector<std::size_t> idx(keys.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        return keys[a] < keys[b];
    });
    return idx;
}

int decode_categorical_key(double key, int cardinality) {
    if (cardinality < 1)
        throw std::invalid_argument("cardinality must be at least 1");
    if (!(key > 0.0) || key > 1.0)
        throw std::invalid_argument("key outside (0,1]");
    // smallest k with key <= k / cardinality, shifted to 0-based
    int k = static_cast<int>(std::ceil(key * cardinality)) - 1;
    if (k < 0) k = 0;
    if (k >= cardinality) k = cardinality - 1;
    return k;
}

std::vector<int> decode_categorical(std::span<const double> keys,
                                    int cardinality) {
    std::vector<int> out;
    out.reserve(keys.size());
    for (double key : keys) out.push_back(decode_categorical_key(key, cardinality));
    return out;
}

std::pair<double, bool> tour_cost(std::span<const Node> nodes,
                                  const Instance& inst, CostMode mode) {
    if (nodes.empty()) return {0.0, true};
    double total = 0.0;
    bool feasible = true;
    auto add = [&](const Node& a, const Node& b) {
        EdgeCost e = inst.edge_cost(a, b);
        total += e.seconds;
        feasible = feasible && !e.padded;
    };
    if (mode == CostMode::HomeAnchored) add(home_node(), nodes.front());
    for (std::size_t i = 1; i < nodes.size(); ++i) add(nodes[i - 1], nodes[i]);
    if (mode == CostMode::HomeAnchored)
        add(nodes.back(), home_node());
    else
        add(nodes.back(), nodes.front());  // one node closes onto itself
    return {total, feasible};
}

namespace {

struct FeatureValues {
    std::vector<int> direction, tool, config, position;
};

FeatureValues decode_feature_blocks(std::span<const double> keys, int n,
                                    const DimSizes& dims) {
    FeatureValues f;
    f.direction = decode_categorical(keys.subspan(0, n), dims.directions);
    f.tool = decode_categorical(keys.subspan(n, n), dims.tools);
    f.config = decode_categorical(keys.subspan(2 * n, n), dims.configs);
    f.position = decode_categorical(keys.subspan(3 * n, n), dims.positions);
    return f;
}

Node seam_node(int dense_seam, const FeatureValues& f) {
    return Node{dense_seam + 1, f.direction[dense_seam], f.tool[dense_seam],
                f.config[dense_seam], f.position[dense_seam]};
}

}  // namespace

Tour decode(const Chromosome& chromosome, const Instance& inst,
            CostMode mode) {
    const int n = inst.seam_count();
    if (chromosome.size() != static_cast<std::size_t>(5 * n))
        throw std::invalid_argument(
            "chromosome length must be 5 * seam count");
    validate_chromosome(chromosome);

    std::span<const double> keys(chromosome);
    auto order = decode_permutation(keys.subspan(0, n));
    FeatureValues f = decode_feature_blocks(keys.subspan(n), n, inst.dims());

    Tour tour;
    tour.nodes.reserve(n);
    for (std::size_t j = 0; j < order.size(); ++j)
        tour.nodes.push_back(seam_node(static_cast<int>(order[j]), f));
    auto [cost, feasible] = tour_cost(tour.nodes, inst, mode);
    tour.total_cost = cost;
    tour.feasible = feasible;
    return tour;
}

MultiRobotPlan decode_multi_robot(const Chromosome& chromosome, int robots,
                                  const Instance& inst,
                                  const CollisionHook& collision) {
    const int n = inst.seam_count();
    const int v = robots;
    if (v < 1) throw std::invalid_argument("need at least one robot");
    const std::size_t short_len = static_cast<std::size_t>(n + v);
    const std::size_t full_len = static_cast<std::size_t>(5 * n + v);
    if (chromosome.size() != short_len && chromosome.size() != full_len)
        throw std::invalid_argument(
            "multi-robot chromosome length must be n_seams + robots, "
            "optionally plus the four feature blocks");
    validate_chromosome(chromosome);

    std::span<const double> keys(chromosome);
    auto order = decode_permutation(keys.subspan(0, short_len));

    FeatureValues f;
    if (chromosome.size() == full_len) {
        f = decode_feature_blocks(keys.subspan(short_len), n, inst.dims());
    } else {
        f.direction.assign(n, 0);
        f.tool.assign(n, 0);
        f.config.assign(n, 0);
        f.position.assign(n, 0);
    }

    // Rotate so the last robot key in sorted order comes last overall; the
    // remaining robot keys then terminate the seam runs they own.
    std::size_t cut = 0;
    for (std::size_t i = 0; i < order.size(); ++i)
        if (order[i] >= static_cast<std::size_t>(n)) cut = i;
    std::vector<std::size_t> rotated;
    rotated.reserve(order.size());
    for (std::size_t i = cut + 1; i < order.size(); ++i)
        rotated.push_back(order[i]);
    for (std::size_t i = 0; i <= cut; ++i) rotated.push_back(order[i]);

    MultiRobotPlan plan;
    plan.tours.assign(v, Tour{});
    std::vector<int> run;
    for (std::size_t idx : rotated) {
        if (idx < static_cast<std::size_t>(n)) {
            run.push_back(static_cast<int>(idx));
            continue;
        }
        Tour& t = plan.tours[idx - n];
        for (int dense : run) t.nodes.push_back(seam_node(dense, f));
        run.clear();
    }

    plan.total_cost = 0.0;
    plan.feasible = true;
    for (Tour& t : plan.tours) {
        auto [cost, feasible] =
            tour_cost(t.nodes, inst, CostMode::HomeAnchored);
        t.total_cost = cost;
        t.feasible = feasible;
        plan.total_cost += cost;
        plan.feasible = plan.feasible && feasible;
    }
    if (collision) plan.total_cost += collision(plan.tours);
    return plan;
}

}  // namespace rko
