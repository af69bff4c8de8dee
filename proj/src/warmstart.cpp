#include "rko/warmstart.hpp"

#include <stdexcept>
#include <string>

#include "rko/rng.hpp"

namespace rko {

namespace {

void check_permutation(const std::vector<std::size_t>& perm) {
    if (perm.empty())
        throw std::invalid_argument("warmstart: empty permutation");
    std::vector<char> seen(perm.size(), 0);
    for (std::size_t v : perm) {
        if (v >= perm.size() || seen[v])
            throw std::invalid_argument(
                "warmstart: not a permutation of 0.." +
                std::to_string(perm.size() - 1));
        seen[v] = 1;
    }
}

}  // namespace

std::vector<double> permutation_centers(const std::vector<std::size_t>& perm) {
    check_permutation(perm);
    const double n = static_cast<double>(perm.size());
    std::vector<double> keys(perm.size());
    for (std::size_t j = 0; j < perm.size(); ++j)
        keys[perm[j]] = (static_cast<double>(j) + 0.5) / n;
    return keys;
}

Chromosome encode_warmstart(const std::vector<std::size_t>& perm,
                            const FeatureAssignment& features,
                            const Instance& inst, std::mt19937_64& rng) {
    const int n = inst.seam_count();
    if (static_cast<int>(perm.size()) != n)
        throw std::invalid_argument("warmstart: permutation length " +
                                    std::to_string(perm.size()) +
                                    " does not match seam count " +
                                    std::to_string(n));
    check_permutation(perm);
    const DimSizes& dims = inst.dims();
    const int cards[4] = {dims.directions, dims.tools, dims.configs,
                          dims.positions};
    for (int b = 0; b < 4; ++b) {
        const auto& v = features.values[b];
        if (static_cast<int>(v.size()) != n)
            throw std::invalid_argument("warmstart: feature block " +
                                        std::to_string(b) + " has " +
                                        std::to_string(v.size()) +
                                        " entries, expected " +
                                        std::to_string(n));
        for (int x : v)
            if (x < 0 || x >= cards[b])
                throw std::invalid_argument("warmstart: feature value " +
                                            std::to_string(x) +
                                            " outside 0.." +
                                            std::to_string(cards[b] - 1));
    }

    Chromosome keys(5 * static_cast<std::size_t>(n));
    // seam block: key of the j-th visited seam lands inside chunk j, so the
    // stable argsort reproduces perm
    const double chunk = 1.0 / static_cast<double>(n);
    for (int j = 0; j < n; ++j)
        keys[perm[j]] = (static_cast<double>(j) + random_key(rng)) * chunk;
    // feature blocks: key inside the half-open bin of the wanted value
    for (int b = 0; b < 4; ++b) {
        const double card = static_cast<double>(cards[b]);
        for (int s = 0; s < n; ++s)
            keys[(b + 1) * static_cast<std::size_t>(n) + s] =
                (static_cast<double>(features.values[b][s]) +
                 random_key(rng)) /
                card;
    }
    for (double& k : keys) k = clamp_key(k);
    return keys;
}

Chromosome encode_tour(const Tour& tour, const Instance& inst,
                       std::mt19937_64& rng) {
    const int n = inst.seam_count();
    if (static_cast<int>(tour.nodes.size()) != n)
        throw std::invalid_argument("warmstart: tour visits " +
                                    std::to_string(tour.nodes.size()) +
                                    " seams, instance has " +
                                    std::to_string(n));
    std::vector<std::size_t> perm(tour.nodes.size());
    FeatureAssignment features;
    for (auto& v : features.values) v.assign(n, 0);
    for (std::size_t j = 0; j < tour.nodes.size(); ++j) {
        const Node& node = tour.nodes[j];
        if (node.seam < 1 || node.seam > n)
            throw std::invalid_argument("warmstart: tour contains seam " +
                                        std::to_string(node.seam));
        const std::size_t dense = static_cast<std::size_t>(node.seam - 1);
        perm[j] = dense;
        features.values[0][dense] = node.direction;
        features.values[1][dense] = node.tool;
        features.values[2][dense] = node.config;
        features.values[3][dense] = node.position;
    }
    return encode_warmstart(perm, features, inst, rng);
}

std::vector<Chromosome> encode_pool(const std::vector<Tour>& tours,
                                    const Instance& inst, std::uint64_t seed) {
    std::vector<Chromosome> pool;
    pool.reserve(tours.size());
    for (std::size_t i = 0; i < tours.size(); ++i) {
        auto rng = make_rng(derive_seed(seed, i));
        pool.push_back(encode_tour(tours[i], inst, rng));
    }
    return pool;
}

}  // namespace rko
