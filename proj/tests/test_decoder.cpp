#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <array>
#include <numeric>
#include <random>
#include <set>

#include "rko/decoder.hpp"
#include "rko/rng.hpp"
#include "test_util.hpp"

using namespace rko;
using namespace rko_test;

namespace {

/// Fully connected instance: every ordered cross-seam pair (home included)
/// is listed with a distinct positive cost derived from the node codes.
Instance dense_instance(int n_seams, DimSizes dims) {
    std::vector<CostRow> rows;
    std::vector<Node> nodes;
    nodes.push_back(home_node());
    for (int s = 1; s <= n_seams; ++s)
        for (int d = 0; d < dims.directions; ++d)
            for (int t = 0; t < dims.tools; ++t)
                for (int c = 0; c < dims.configs; ++c)
                    for (int p = 0; p < dims.positions; ++p)
                        nodes.push_back(Node{s, d, t, c, p});
    int i = 0;
    for (const Node& a : nodes)
        for (const Node& b : nodes) {
            if (a.seam == b.seam) continue;
            rows.push_back({a, b, 1.0 + 0.001 * (i % 997)});
            ++i;
        }
    return make_instance(n_seams, dims, std::move(rows));
}

std::vector<std::size_t> sorted_by_pairs(std::span<const double> keys) {
    std::vector<std::pair<double, std::size_t>> v;
    for (std::size_t i = 0; i < keys.size(); ++i) v.push_back({keys[i], i});
    std::sort(v.begin(), v.end());
    std::vector<std::size_t> out;
    for (auto& [k, i] : v) out.push_back(i);
    return out;
}

}  // namespace

TEST_CASE("key sorting yields the published five-key order") {
    std::vector<double> keys{0.45, 0.78, 0.15, 0.33, 0.95};
    auto perm = decode_permutation(keys);
    CHECK(perm == std::vector<std::size_t>{2, 3, 0, 1, 4});  // 1-based 3,4,1,2,5
}

TEST_CASE("equal keys keep index order") {
    std::vector<double> keys{0.5, 0.5, 0.1};
    CHECK(decode_permutation(keys) == std::vector<std::size_t>{2, 0, 1});
    std::vector<double> same{0.7, 0.7, 0.7, 0.7};
    CHECK(decode_permutation(same) == std::vector<std::size_t>{0, 1, 2, 3});
}

TEST_CASE("sorted-index decoding is a permutation that sorts the keys") {
    auto rng = make_rng(101);
    for (int rep = 0; rep < 1000; ++rep) {
        std::uniform_int_distribution<std::size_t> len(1, 40);
        Chromosome keys = random_chromosome(len(rng), rng);
        auto perm = decode_permutation(keys);

        std::vector<std::size_t> sorted_perm = perm;
        std::sort(sorted_perm.begin(), sorted_perm.end());
        std::vector<std::size_t> iota(perm.size());
        std::iota(iota.begin(), iota.end(), 0);
        REQUIRE(sorted_perm == iota);
        for (std::size_t i = 1; i < perm.size(); ++i)
            REQUIRE(keys[perm[i - 1]] <= keys[perm[i]]);
        REQUIRE(perm == sorted_by_pairs(keys));
    }
}

TEST_CASE("categorical bins are open below and closed above") {
    std::vector<double> keys{0.2, 0.5, 0.505, 1.0};
    CHECK(decode_categorical(keys, 4) == std::vector<int>{0, 1, 2, 3});

    CHECK(decode_categorical_key(0.25, 4) == 0);    // boundary joins the lower bin
    CHECK(decode_categorical_key(0.5, 2) == 0);
    CHECK(decode_categorical_key(1.0, 7) == 6);
    CHECK(decode_categorical_key(1e-300, 5) == 0);
    for (int c = 1; c <= 9; ++c) CHECK(decode_categorical_key(1.0, c) == c - 1);
}

TEST_CASE("single-category decoding is constantly zero") {
    auto rng = make_rng(7);
    for (int rep = 0; rep < 100; ++rep)
        CHECK(decode_categorical_key(random_key(rng), 1) == 0);
}

TEST_CASE("categorical value is stable inside its bin") {
    auto rng = make_rng(55);
    for (int rep = 0; rep < 1000; ++rep) {
        std::uniform_int_distribution<int> card(1, 11);
        int c = card(rng);
        double key = random_key(rng);
        int v = decode_categorical_key(key, c);
        REQUIRE(v >= 0);
        REQUIRE(v < c);
        // membership: key in (v/c, (v+1)/c]
        REQUIRE(key > static_cast<double>(v) / c);
        REQUIRE(key <= static_cast<double>(v + 1) / c);
        // another key in the same open-closed bin decodes identically
        std::uniform_real_distribution<double> u(0.0, 1.0);
        double other =
            (static_cast<double>(v) + 1.0 - u(rng)) / static_cast<double>(c);
        REQUIRE(decode_categorical_key(other, c) == v);
    }
}

TEST_CASE("chromosome blocks bind features to seams, order to block 0") {
    Instance inst = dense_instance(2, DimSizes{2, 2, 2, 2});
    // seam keys: dense seam 1 sorts first; feature keys chosen per seam
    Chromosome x{0.9,  0.1,    // seam order: dense 1 then dense 0
                 0.3,  0.7,    // directions: seam0 -> 0, seam1 -> 1
                 0.6,  0.4,    // tools:      seam0 -> 1, seam1 -> 0
                 0.2,  0.9,    // configs:    seam0 -> 0, seam1 -> 1
                 1.0,  0.5};   // positions:  seam0 -> 1, seam1 -> 0
    Tour tour = decode(x, inst);
    REQUIRE(tour.nodes.size() == 2);
    CHECK(tour.nodes[0] == N(2, 1, 0, 1, 0));  // dense seam 1 = internal 2
    CHECK(tour.nodes[1] == N(1, 0, 1, 0, 1));
    CHECK(tour.feasible);
    auto [cost, feasible] = tour_cost(tour.nodes, inst, CostMode::HomeAnchored);
    CHECK(tour.total_cost == cost);
    CHECK(feasible);
}

TEST_CASE("decode rejects wrong chromosome lengths and bad keys") {
    Instance inst = dense_instance(2, DimSizes{1, 1, 1, 1});
    CHECK_THROWS_AS(decode(Chromosome(9, 0.5), inst), std::invalid_argument);
    CHECK_THROWS_AS(decode(Chromosome(11, 0.5), inst), std::invalid_argument);
    Chromosome bad(10, 0.5);
    bad[3] = 0.0;
    CHECK_THROWS_AS(decode(bad, inst), std::invalid_argument);
    bad[3] = 1.5;
    CHECK_THROWS_AS(decode(bad, inst), std::invalid_argument);
}

TEST_CASE("hand-built three-seam tour costs") {
    DimSizes dims{1, 1, 1, 1};
    Node h = home_node();
    Node a = N(1, 0, 0, 0, 0), b = N(2, 0, 0, 0, 0), c = N(3, 0, 0, 0, 0);
    Instance inst = make_instance(
        3, dims,
        {{h, a, 1.0}, {a, b, 2.0}, {b, c, 4.0}, {c, h, 8.0}, {c, a, 16.0}});

    std::vector<Node> tour{a, b, c};
    auto [anchored, ok1] = tour_cost(tour, inst, CostMode::HomeAnchored);
    CHECK(anchored == 1.0 + 2.0 + 4.0 + 8.0);
    CHECK(ok1);

    auto [cyclic, ok2] = tour_cost(tour, inst, CostMode::Cyclic);
    CHECK(cyclic == 2.0 + 4.0 + 16.0);
    CHECK(ok2);

    // b -> a is unlisted: padded edge poisons feasibility but not the sum
    std::vector<Node> back{b, a};
    auto [cost, ok3] = tour_cost(back, inst, CostMode::Cyclic);
    CHECK_FALSE(ok3);
    CHECK(cost == inst.padding_cost() + 2.0);

    auto [empty_cost, ok4] = tour_cost({}, inst, CostMode::HomeAnchored);
    CHECK(empty_cost == 0.0);
    CHECK(ok4);
}

TEST_CASE("single-seam tours close straight back home") {
    DimSizes dims{1, 1, 1, 1};
    Node h = home_node(), a = N(1, 0, 0, 0, 0);
    Instance inst = make_instance(1, dims, {{h, a, 3.0}, {a, h, 5.0}});
    Chromosome x(5, 0.5);
    Tour t = decode(x, inst);
    REQUIRE(t.nodes.size() == 1);
    CHECK(t.total_cost == 8.0);
    CHECK(t.feasible);
}

TEST_CASE("decoded tours visit every seam exactly once and recompute") {
    auto rng = make_rng(2024);
    Instance inst = dense_instance(6, DimSizes{2, 2, 2, 2});
    for (int rep = 0; rep < 1000; ++rep) {
        Chromosome x = random_chromosome(30, rng);
        Tour t = decode(x, inst);
        REQUIRE(t.nodes.size() == 6);
        std::set<int> seams;
        for (const Node& n : t.nodes) seams.insert(n.seam);
        REQUIRE(seams == std::set<int>{1, 2, 3, 4, 5, 6});
        auto [cost, feasible] =
            tour_cost(t.nodes, inst, CostMode::HomeAnchored);
        REQUIRE(t.total_cost == cost);
        REQUIRE(t.feasible == feasible);
    }
}

TEST_CASE("vehicle keys split the published seven-key tour") {
    Instance inst = dense_instance(5, DimSizes{1, 1, 1, 1});
    Chromosome x{0.45, 0.78, 0.15, 0.33, 0.95, 0.25, 0.35};
    MultiRobotPlan plan = decode_multi_robot(x, 2, inst);
    REQUIRE(plan.tours.size() == 2);

    auto seams = [](const Tour& t) {
        std::vector<int> s;
        for (const Node& n : t.nodes) s.push_back(n.seam);
        return s;
    };
    CHECK(seams(plan.tours[0]) == std::vector<int>{1, 2, 5, 3});
    CHECK(seams(plan.tours[1]) == std::vector<int>{4});
}

TEST_CASE("robot keys split the published eight-key plan") {
    Instance inst = dense_instance(6, DimSizes{1, 1, 1, 1});
    Chromosome x{0.25, 0.19, 0.67, 0.98, 0.04, 0.82, 0.23, 0.71};
    MultiRobotPlan plan = decode_multi_robot(x, 2, inst);
    REQUIRE(plan.tours.size() == 2);

    auto seams = [](const Tour& t) {
        std::vector<int> s;
        for (const Node& n : t.nodes) s.push_back(n.seam);
        return s;
    };
    CHECK(seams(plan.tours[0]) == std::vector<int>{6, 4, 5, 2});
    CHECK(seams(plan.tours[1]) == std::vector<int>{1, 3});
}

TEST_CASE("one robot owns the whole seam partition") {
    Instance inst = dense_instance(5, DimSizes{2, 2, 2, 2});
    auto rng = make_rng(31);
    for (int rep = 0; rep < 200; ++rep) {
        Chromosome solo = random_chromosome(25, rng);
        Chromosome multi(solo.begin(), solo.begin() + 5);
        multi.push_back(random_key(rng));  // the single robot key
        multi.insert(multi.end(), solo.begin() + 5, solo.end());
        MultiRobotPlan plan = decode_multi_robot(multi, 1, inst);
        Tour single = decode(solo, inst);
        REQUIRE(plan.tours.size() == 1);
        // same partition: every seam in the one tour, same node per seam
        std::multiset<Node> a(plan.tours[0].nodes.begin(),
                              plan.tours[0].nodes.end());
        std::multiset<Node> b(single.nodes.begin(), single.nodes.end());
        REQUIRE(a == b);
    }
}

TEST_CASE("a top-sorting robot key leaves the seam order untouched") {
    Instance inst = dense_instance(5, DimSizes{2, 2, 2, 2});
    auto rng = make_rng(32);
    for (int rep = 0; rep < 200; ++rep) {
        Chromosome solo = random_chromosome(25, rng);
        for (int i = 0; i < 5; ++i) solo[i] *= 0.99;  // keep 1.0 on top
        Chromosome multi(solo.begin(), solo.begin() + 5);
        multi.push_back(1.0);  // rotates to the end: identity rotation
        multi.insert(multi.end(), solo.begin() + 5, solo.end());
        MultiRobotPlan plan = decode_multi_robot(multi, 1, inst);
        Tour single = decode(solo, inst);
        REQUIRE(plan.tours.size() == 1);
        REQUIRE(plan.tours[0].nodes == single.nodes);
        REQUIRE(plan.tours[0].total_cost == single.total_cost);
    }
}

TEST_CASE("multi-robot plans partition the seams and sum their costs") {
    Instance inst = dense_instance(7, DimSizes{2, 2, 1, 1});
    auto rng = make_rng(77);
    for (int rep = 0; rep < 300; ++rep) {
        int v = 2 + rep % 3;
        Chromosome x = random_chromosome(7 + v + 4 * 7, rng);
        MultiRobotPlan plan = decode_multi_robot(x, v, inst);
        REQUIRE(plan.tours.size() == static_cast<std::size_t>(v));
        std::multiset<int> seams;
        double total = 0.0;
        bool feasible = true;
        for (const Tour& t : plan.tours) {
            for (const Node& n : t.nodes) seams.insert(n.seam);
            auto [cost, ok] =
                tour_cost(t.nodes, inst, CostMode::HomeAnchored);
            REQUIRE(t.total_cost == cost);
            total += cost;
            feasible = feasible && ok;
        }
        std::multiset<int> expect;
        for (int s = 1; s <= 7; ++s) expect.insert(s);
        REQUIRE(seams == expect);
        REQUIRE(plan.total_cost == total);
        REQUIRE(plan.feasible == feasible);
    }
}

TEST_CASE("an idle robot contributes an empty zero-cost tour") {
    Instance inst = dense_instance(2, DimSizes{1, 1, 1, 1});
    // robot keys 0.8 and 0.9 sort above both seam keys: rotation puts the
    // 0.9 key last, the 0.8 key right before it, leaving robot 1 idle
    Chromosome x{0.1, 0.2, 0.8, 0.9};
    MultiRobotPlan plan = decode_multi_robot(x, 2, inst);
    REQUIRE(plan.tours.size() == 2);
    CHECK(plan.tours[0].nodes.size() == 2);
    CHECK(plan.tours[1].nodes.empty());
    CHECK(plan.tours[1].total_cost == 0.0);
    CHECK(plan.tours[1].feasible);
}

TEST_CASE("collision hook adds its term to the plan cost") {
    Instance inst = dense_instance(3, DimSizes{1, 1, 1, 1});
    Chromosome x{0.3, 0.6, 0.9, 0.5, 0.7};
    MultiRobotPlan base = decode_multi_robot(x, 2, inst);
    MultiRobotPlan bumped = decode_multi_robot(
        x, 2, inst, [](const std::vector<Tour>& tours) {
            return 10.0 * static_cast<double>(tours.size());
        });
    CHECK(bumped.total_cost == base.total_cost + 20.0);
}

TEST_CASE("multi-robot length validation") {
    Instance inst = dense_instance(3, DimSizes{1, 1, 1, 1});
    CHECK_THROWS_AS(decode_multi_robot(Chromosome(4, 0.5), 2, inst),
                    std::invalid_argument);
    CHECK_THROWS_AS(decode_multi_robot(Chromosome(3 + 2 + 12 + 1, 0.5), 2, inst),
                    std::invalid_argument);
    CHECK_THROWS_AS(decode_multi_robot(Chromosome(5, 0.5), 0, inst),
                    std::invalid_argument);
}
