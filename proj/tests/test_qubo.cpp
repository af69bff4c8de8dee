#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <vector>

#include "rko/decoder.hpp"
#include "rko/qubo.hpp"
#include "rko/rng.hpp"
#include "oracle.hpp"
#include "test_util.hpp"

using namespace rko;
using namespace rko_test;

namespace {

Instance micro_instance(int n_seams, DimSizes dims, std::uint64_t seed,
                        double rate = 1.0) {
    GeneratorParams p;
    p.n_seams = n_seams;
    p.dims = dims;
    p.feasibility_rate = rate;
    p.seed = seed;
    return generate_synthetic(p);
}

// independent quadratic-form evaluation used as the energy oracle
double direct_energy(const QuboProblem& q, const std::vector<int>& x) {
    double e = q.offset;
    for (const auto& t : q.terms)
        e += t.weight * x[t.i] * x[t.j];
    return e;
}

std::vector<int> bits_of(unsigned mask, std::size_t n) {
    std::vector<int> x(n, 0);
    for (std::size_t i = 0; i < n; ++i)
        if (mask & (1u << i)) x[i] = 1;
    return x;
}

}  // namespace

TEST_CASE("variable counts and the hardware estimate") {
    CHECK(qubo_variable_count(3, DimSizes{2, 2, 1, 1}) == 36);
    CHECK(qubo_variable_count(2, DimSizes{1, 1, 1, 1}) == 4);
    CHECK(qubit_count_estimate(50, 3, 10, 3) == 450000ULL);
    CHECK(qubit_count_estimate(2, 1, 1, 1) == 8ULL);
    CHECK_THROWS_AS(qubo_variable_count(2000000000, DimSizes{100, 100, 100, 100}),
                    std::overflow_error);
}

TEST_CASE("energy evaluation matches a direct quadratic form") {
    QuboProblem q;
    q.n_vars = 4;
    q.terms = {{0, 0, -1.0}, {0, 1, 2.0}, {1, 2, -0.5}, {2, 3, 0.25},
               {3, 3, 1.0}};
    q.offset = 0.7;
    for (unsigned mask = 0; mask < 16; ++mask) {
        auto x = bits_of(mask, 4);
        CHECK(qubo_energy(q, x) ==
              Catch::Approx(direct_energy(q, x)).epsilon(0.0).margin(1e-12));
    }
}

TEST_CASE("an empty assignment pays exactly the constraint offset") {
    Instance inst = micro_instance(3, DimSizes{2, 1, 1, 1}, 14);
    const double penalty = default_penalty(inst);
    CHECK(penalty == 2.0 * 3 * inst.max_finite_cost());
    QuboProblem q = build_qubo(inst, penalty);
    REQUIRE(q.n_vars == qubo_variable_count(3, inst.dims()));
    CHECK(q.penalty == penalty);
    std::vector<int> zeros(q.n_vars, 0);
    // 2n brackets, each contributing penalty when its sum is zero
    CHECK(qubo_energy(q, zeros) ==
          Catch::Approx(2.0 * 3 * penalty).epsilon(1e-12));
}

TEST_CASE("variable layout round-trips") {
    Instance inst = micro_instance(3, DimSizes{2, 1, 1, 1}, 14);
    QuboProblem q = build_qubo(inst, default_penalty(inst));
    REQUIRE(q.has_layout());
    for (std::size_t v = 0; v < q.n_vars; ++v) {
        auto [node, t] = q.var_node(v);
        REQUIRE(node.seam >= 1);
        REQUIRE(node.seam <= 3);
        REQUIRE(t >= 0);
        REQUIRE(t < 3);
        REQUIRE(q.var_index(node, t) == v);
    }
    CHECK_THROWS_AS(q.var_index(home_node(), 0), std::invalid_argument);
    CHECK_THROWS_AS(q.var_index(N(1, 0, 0, 0, 0), 3), std::invalid_argument);
}

TEST_CASE("feasible assignments cost exactly their cyclic tour") {
    Instance inst = micro_instance(3, DimSizes{2, 1, 1, 1}, 25);
    QuboProblem q = build_qubo(inst, default_penalty(inst));
    const DimSizes& dims = inst.dims();
    const int combos = dims.combos();

    std::vector<int> seams{1, 2, 3};
    auto rng = make_rng(71);
    std::vector<int> perm_idx{0, 1, 2};
    std::sort(perm_idx.begin(), perm_idx.end());
    do {
        for (int rep = 0; rep < 4; ++rep) {
            Tour tour;
            for (int j = 0; j < 3; ++j) {
                std::uniform_int_distribution<int> pick(0, combos - 1);
                tour.nodes.push_back(
                    oracle_node(seams[static_cast<std::size_t>(
                                    perm_idx[static_cast<std::size_t>(j)])],
                                pick(rng), dims));
            }
            auto [cost, feasible] =
                tour_cost(tour.nodes, inst, CostMode::Cyclic);
            tour.total_cost = cost;
            tour.feasible = feasible;

            auto x = encode_tour_assignment(tour, q);
            REQUIRE(x.size() == q.n_vars);
            REQUIRE(std::count(x.begin(), x.end(), 1) == 3);
            CHECK(qubo_energy(q, x) ==
                  Catch::Approx(cost).epsilon(0.0).margin(1e-9));

            QuboDecodeReport report = decode_qubo_solution(x, q);
            REQUIRE(report.constraints_ok());
            REQUIRE(report.tour.has_value());
            CHECK(report.tour->nodes == tour.nodes);
            CHECK(report.tour->total_cost ==
                  Catch::Approx(cost).epsilon(0.0).margin(1e-12));
        }
    } while (std::next_permutation(perm_idx.begin(), perm_idx.end()));
}

TEST_CASE("constraint violations are reported precisely") {
    Instance inst = micro_instance(3, DimSizes{2, 1, 1, 1}, 25);
    QuboProblem q = build_qubo(inst, default_penalty(inst));

    std::vector<int> zeros(q.n_vars, 0);
    QuboDecodeReport empty = decode_qubo_solution(zeros, q);
    REQUIRE_FALSE(empty.constraints_ok());
    REQUIRE_FALSE(empty.tour.has_value());
    int timestep_empty = 0, seam_missing = 0;
    for (const auto& v : empty.violations) {
        if (v.kind == QuboViolation::Kind::TimestepEmpty) ++timestep_empty;
        if (v.kind == QuboViolation::Kind::SeamMissing) ++seam_missing;
        CHECK_FALSE(v.describe().empty());
    }
    CHECK(timestep_empty == 3);
    CHECK(seam_missing == 3);

    // same seam twice, one seam absent, one timestep doubled
    std::vector<int> twisted(q.n_vars, 0);
    twisted[q.var_index(N(1, 0, 0, 0, 0), 0)] = 1;
    twisted[q.var_index(N(1, 1, 0, 0, 0), 1)] = 1;
    twisted[q.var_index(N(2, 0, 0, 0, 0), 1)] = 1;
    QuboDecodeReport rep = decode_qubo_solution(twisted, q);
    REQUIRE_FALSE(rep.constraints_ok());
    bool saw_repeat = false, saw_missing = false, saw_multi = false,
         saw_empty = false;
    for (const auto& v : rep.violations) {
        if (v.kind == QuboViolation::Kind::SeamRepeated && v.index == 1 &&
            v.count == 2)
            saw_repeat = true;
        if (v.kind == QuboViolation::Kind::SeamMissing && v.index == 3)
            saw_missing = true;
        if (v.kind == QuboViolation::Kind::TimestepMultiple && v.index == 1 &&
            v.count == 2)
            saw_multi = true;
        if (v.kind == QuboViolation::Kind::TimestepEmpty && v.index == 2)
            saw_empty = true;
    }
    CHECK(saw_repeat);
    CHECK(saw_missing);
    CHECK(saw_multi);
    CHECK(saw_empty);
    CHECK_FALSE(rep.summary().empty());

    CHECK_THROWS_AS(decode_qubo_solution(std::vector<int>(3, 0), q),
                    std::invalid_argument);
}

TEST_CASE("spin conversion keeps the energy landscape") {
    // single variable: field and offset are each half the linear weight
    QuboProblem single;
    single.n_vars = 1;
    single.terms = {{0, 0, 3.0}};
    IsingProblem ising = to_ising(single);
    REQUIRE(ising.couplings.empty());
    REQUIRE(ising.fields.size() == 1);
    CHECK(ising.fields[0] == Catch::Approx(1.5).epsilon(1e-15));
    CHECK(ising.offset == Catch::Approx(1.5).epsilon(1e-15));
    std::vector<int> down{-1}, up{1};
    CHECK(ising_energy(ising, down) == Catch::Approx(0.0).margin(1e-15));
    CHECK(ising_energy(ising, up) == Catch::Approx(3.0).epsilon(1e-15));

    // random six-variable model: both forms agree on every assignment
    auto rng = make_rng(5150);
    std::uniform_real_distribution<double> w(-2.0, 2.0);
    QuboProblem q;
    q.n_vars = 6;
    q.offset = w(rng);
    for (std::uint32_t i = 0; i < 6; ++i)
        for (std::uint32_t j = i; j < 6; ++j)
            q.terms.push_back({i, j, w(rng)});
    IsingProblem s = to_ising(q);
    for (unsigned mask = 0; mask < 64; ++mask) {
        auto x = bits_of(mask, 6);
        std::vector<int> z(6);
        for (int i = 0; i < 6; ++i) z[static_cast<std::size_t>(i)] =
            2 * x[static_cast<std::size_t>(i)] - 1;
        CHECK(ising_energy(s, z) ==
              Catch::Approx(qubo_energy(q, x)).epsilon(0.0).margin(1e-9));
    }
}

TEST_CASE("brute force agrees with the native cyclic optimum") {
    // 2 seams x 2 combos -> 8 variables
    Instance inst = micro_instance(2, DimSizes{2, 1, 1, 1}, 33);
    QuboProblem q = build_qubo(inst, default_penalty(inst));
    REQUIRE(q.n_vars == 8);

    SaResult ground = brute_force(q);
    const double opt = oracle_optimum(inst, CostMode::Cyclic);
    CHECK(ground.energy == Catch::Approx(opt).epsilon(0.0).margin(1e-9));
    QuboDecodeReport rep = decode_qubo_solution(ground.assignment, q);
    REQUIRE(rep.constraints_ok());
    CHECK(rep.tour->total_cost ==
          Catch::Approx(opt).epsilon(0.0).margin(1e-9));

    // with incomplete cost tables the minimiser tracks the padded optimum
    Instance sparse = micro_instance(2, DimSizes{2, 1, 1, 1}, 91, 0.6);
    QuboProblem qs = build_qubo(sparse, default_penalty(sparse));
    SaResult ground_s = brute_force(qs);
    const double opt_s = oracle_optimum(sparse, CostMode::Cyclic);
    CHECK(ground_s.energy == Catch::Approx(opt_s).epsilon(0.0).margin(1e-9));

    QuboProblem big;
    big.n_vars = 25;
    CHECK_THROWS_AS(brute_force(big), std::invalid_argument);
}

TEST_CASE("annealed bit flips reach the tiny ground state") {
    Instance inst = micro_instance(2, DimSizes{2, 1, 1, 1}, 33);
    QuboProblem q = build_qubo(inst, default_penalty(inst));
    SaResult ground = brute_force(q);

    SaParams params;
    params.sweeps = 3000;
    params.seed = 17;
    SaResult annealed = solve_sa(q, params);
    REQUIRE(annealed.assignment.size() == q.n_vars);
    CHECK(annealed.energy ==
          Catch::Approx(ground.energy).epsilon(0.0).margin(1e-9));
    CHECK(annealed.energy ==
          Catch::Approx(qubo_energy(q, annealed.assignment))
              .epsilon(0.0)
              .margin(1e-9));
    CHECK(annealed.flips_accepted > 0);

    // zero sweeps just scores the random start
    SaParams none;
    none.sweeps = 0;
    none.seed = 4;
    SaResult idle = solve_sa(q, none);
    CHECK(idle.energy ==
          Catch::Approx(qubo_energy(q, idle.assignment)).margin(1e-9));
    CHECK(idle.flips_accepted == 0);

    // deterministic in the seed
    SaResult again = solve_sa(q, params);
    CHECK(again.assignment == annealed.assignment);
    CHECK(again.energy == annealed.energy);
}

TEST_CASE("coefficient files round-trip") {
    Instance inst = micro_instance(3, DimSizes{2, 1, 1, 1}, 25);
    QuboProblem q = build_qubo(inst, default_penalty(inst));
    TempDir dir;
    const std::string path = dir.path("model.qubo");
    save_qubo(q, path);

    QuboProblem back = load_qubo(path);
    REQUIRE(back.n_vars == q.n_vars);
    REQUIRE(back.terms.size() == q.terms.size());
    for (std::size_t i = 0; i < q.terms.size(); ++i) {
        REQUIRE(back.terms[i].i == q.terms[i].i);
        REQUIRE(back.terms[i].j == q.terms[i].j);
        REQUIRE(back.terms[i].weight == q.terms[i].weight);
    }
    CHECK(back.offset == q.offset);
    CHECK_FALSE(back.has_layout());

    // energies agree everywhere it matters
    auto rng = make_rng(3);
    std::bernoulli_distribution coin(0.3);
    for (int rep = 0; rep < 50; ++rep) {
        std::vector<int> x(q.n_vars);
        for (auto& b : x) b = coin(rng) ? 1 : 0;
        REQUIRE(qubo_energy(back, x) == qubo_energy(q, x));
    }

    std::vector<int> ones(q.n_vars, 1);
    CHECK_THROWS_AS(decode_qubo_solution(ones, back), std::invalid_argument);
    CHECK_THROWS_AS(load_qubo(dir.path("absent.qubo")),
                    std::runtime_error);
}

TEST_CASE("builder rejects bad penalties and oversized instances") {
    Instance inst = micro_instance(3, DimSizes{2, 1, 1, 1}, 25);
    CHECK_THROWS_AS(build_qubo(inst, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(build_qubo(inst, -2.0), std::invalid_argument);
    CHECK_THROWS_AS(build_qubo(inst, default_penalty(inst), 17),
                    std::length_error);
    CHECK_NOTHROW(build_qubo(inst, default_penalty(inst), 18));
}
