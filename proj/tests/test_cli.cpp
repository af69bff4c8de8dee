#include <sys/wait.h>

#include <algorithm>
#include <cstdlib>
#include <limits>
#include <string>
#include <vector>

#include "catch2/catch_amalgamated.hpp"
#include "rko/bench.hpp"
#include "rko/decoder.hpp"
#include "rko/instance.hpp"
#include "rko/qubo.hpp"
#include "rko/serialization.hpp"
#include "test_util.hpp"

using namespace rko;
using namespace rko_test;

#define CLI_STRINGIFY_IMPL(x) #x
#define CLI_STRINGIFY(x) CLI_STRINGIFY_IMPL(x)

namespace {

const std::string kBin = CLI_STRINGIFY(RKO_ROUTE_BIN);

/// Run the installed binary with `args`, capture stdout+stderr, return the
/// exit code. Everything runs inside `dir` so relative artifacts land there.
int run_cli(const TempDir& dir, const std::string& args,
            std::string* output = nullptr) {
    const std::string log = dir.path("cli_output.log");
    const std::string cmd = "cd " + dir.path("") + " && " + kBin + " " +
                            args + " > " + log + " 2>&1";
    const int status = std::system(cmd.c_str());
    if (output) *output = read_file(log);
    REQUIRE(WIFEXITED(status));
    return WEXITSTATUS(status);
}

double parse_field(const std::string& text, const std::string& key) {
    const auto pos = text.find(key + "=");
    REQUIRE(pos != std::string::npos);
    return std::strtod(text.c_str() + pos + key.size() + 1, nullptr);
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> lines;
    std::size_t start = 0;
    while (start < text.size()) {
        auto end = text.find('\n', start);
        if (end == std::string::npos) end = text.size();
        lines.push_back(text.substr(start, end - start));
        start = end + 1;
    }
    return lines;
}

}  // namespace

TEST_CASE("cli generates deterministic instances") {
    TempDir dir;
    CHECK(run_cli(dir, "--seed 5 gen --seams 6 --rate 0.9 -o a.csv") == 0);
    CHECK(run_cli(dir, "--seed 5 gen --seams 6 --rate 0.9 -o b.csv") == 0);
    CHECK(run_cli(dir, "--seed 6 gen --seams 6 --rate 0.9 -o c.csv") == 0);
    CHECK(read_file(dir.path("a.csv")) == read_file(dir.path("b.csv")));
    CHECK(read_file(dir.path("a.csv")) != read_file(dir.path("c.csv")));

    Instance inst = load_instance(dir.path("a.csv"));
    CHECK(inst.seam_count() == 6);

    CHECK(run_cli(dir, "--seed 1 downsample --instance a.csv --keep 3 "
                       "-o small.csv") == 0);
    CHECK(load_instance(dir.path("small.csv")).seam_count() == 3);
}

TEST_CASE("cli greedy solve writes reloadable artifacts") {
    TempDir dir;
    REQUIRE(run_cli(dir, "--seed 5 gen --seams 6 --rate 0.9 -o f.csv") == 0);
    std::string out;
    CHECK(run_cli(dir,
                  "--seed 3 solve --solver greedy --instance f.csv "
                  "--shots 200 --out-dir run",
                  &out) == 0);
    const double reported = parse_field(out, "best");

    Tour tour = load_tour_json(dir.path("run/tour.json"));
    CHECK(tour.feasible);
    CHECK(tour.total_cost == reported);

    // the stored cost must be recomputable from the stored nodes
    Instance inst = load_instance(dir.path("f.csv"));
    auto [cost, feasible] =
        tour_cost(tour.nodes, inst, CostMode::HomeAnchored);
    CHECK(feasible);
    CHECK(cost == Catch::Approx(tour.total_cost).margin(1e-12));

    CHECK(lines_of(read_file(dir.path("run/shots.csv"))).size() == 201);
    CHECK(read_file(dir.path("run/summary.json")).find("median_cost") !=
          std::string::npos);
    CHECK(lines_of(read_file(dir.path("run/trace.csv")))[0] ==
          "wall_seconds,cost");
}

TEST_CASE("cli reports validation errors with exit 1") {
    TempDir dir;
    std::string out;
    CHECK(run_cli(dir, "solve --solver greedy --instance missing.csv",
                  &out) == 1);
    CHECK(out.find("missing.csv") != std::string::npos);
    CHECK(run_cli(dir, "solve --solver greedy") == 1);  // missing required
    REQUIRE(run_cli(dir, "--seed 1 gen --seams 3 -o f.csv") == 0);
    CHECK(run_cli(dir, "solve --solver sorcery --instance f.csv") == 1);
    CHECK(run_cli(dir, "--no-such-flag gen --seams 3 -o g.csv") == 1);
    CHECK(run_cli(dir, "solve --solver brkga --instance f.csv "
                       "--emit-pool p.json") == 1);
}

TEST_CASE("cli warmstart pool bounds the first trace row") {
    TempDir dir;
    REQUIRE(run_cli(dir, "--seed 5 gen --seams 6 --rate 0.9 -o f.csv") == 0);
    REQUIRE(run_cli(dir, "--seed 3 solve --solver greedy --instance f.csv "
                         "--shots 300 --out-dir g --emit-pool pool.json "
                         "--pool-size 5") == 0);

    Instance inst = load_instance(dir.path("f.csv"));
    std::vector<Chromosome> pool = load_pool_json(dir.path("pool.json"));
    REQUIRE(pool.size() == 5);
    double pool_best = std::numeric_limits<double>::infinity();
    for (const Chromosome& keys : pool) {
        REQUIRE(keys.size() == 5u * inst.seam_count());
        pool_best = std::min(pool_best, decode(keys, inst).total_cost);
    }

    REQUIRE(run_cli(dir, "solve --solver brkga --instance f.csv "
                         "--warmstart pool.json --out-dir b") == 0);
    const auto trace = lines_of(read_file(dir.path("b/trace.csv")));
    REQUIRE(trace.size() >= 2);
    REQUIRE(trace[1].rfind("0,", 0) == 0);
    const double initial_best =
        std::strtod(trace[1].c_str() + 2, nullptr);
    CHECK(initial_best <= pool_best + 1e-12);
}

TEST_CASE("cli relink at the endpoints returns the cheaper input") {
    TempDir dir;
    REQUIRE(run_cli(dir, "--seed 5 gen --seams 6 --rate 0.9 -o f.csv") == 0);
    REQUIRE(run_cli(dir, "--seed 3 solve --solver greedy --instance f.csv "
                         "--shots 40 --out-dir r1") == 0);
    REQUIRE(run_cli(dir, "--seed 8 solve --solver greedy --instance f.csv "
                         "--shots 1 --out-dir r2") == 0);
    const double cost_a =
        load_tour_json(dir.path("r1/tour.json")).total_cost;
    const double cost_b =
        load_tour_json(dir.path("r2/tour.json")).total_cost;

    std::string out;
    CHECK(run_cli(dir,
                  "--seed 2 relink --instance f.csv --tour-a r1/tour.json "
                  "--tour-b r2/tour.json --grid 2 -o best.json",
                  &out) == 0);
    const double relinked = parse_field(out, "cost");
    CHECK(relinked == Catch::Approx(std::min(cost_a, cost_b)).margin(1e-9));
    CHECK(load_tour_json(dir.path("best.json")).total_cost ==
          Catch::Approx(relinked).margin(1e-12));

    // denser grid can only help
    CHECK(run_cli(dir,
                  "--seed 2 relink --instance f.csv --tour-a r1/tour.json "
                  "--tour-b r2/tour.json --grid 11",
                  &out) == 0);
    CHECK(parse_field(out, "cost") <= relinked + 1e-12);

    // chromosomes for a different instance are rejected
    REQUIRE(run_cli(dir, "--seed 1 gen --seams 3 -o other.csv") == 0);
    REQUIRE(run_cli(dir, "--seed 1 solve --solver greedy "
                         "--instance other.csv --shots 5 --out-dir o "
                         "--emit-pool op.json --pool-size 2") == 0);
    const std::vector<Chromosome> op_pool =
        load_pool_json(dir.path("op.json"));
    std::string keys_text;
    for (double key : op_pool.front())
        keys_text += format_double(key) + "\n";
    write_file(dir.path("one.txt"), keys_text);
    CHECK(run_cli(dir, "relink --instance f.csv --chrom-a one.txt "
                       "--chrom-b one.txt") == 1);
}

TEST_CASE("cli qubo estimate prints the headline count") {
    TempDir dir;
    std::string out;
    CHECK(run_cli(dir,
                  "qubo estimate --seams 50 --tools 3 --configs 10 "
                  "--positions 3",
                  &out) == 0);
    CHECK(out == "450000\n");
}

TEST_CASE("cli qubo build, brute, and solve-sa agree on a tiny model") {
    TempDir dir;
    REQUIRE(run_cli(dir, "--seed 1 gen --seams 2 --dirs 1 --tools 1 "
                         "--configs 1 --positions 1 -o tiny.csv") == 0);
    std::string out;
    CHECK(run_cli(dir, "qubo build --instance tiny.csv -o model.qubo",
                  &out) == 0);
    CHECK(out.find("n_vars=4") != std::string::npos);
    QuboProblem loaded = load_qubo(dir.path("model.qubo"));
    CHECK(loaded.n_vars == 4);
    CHECK_FALSE(loaded.has_layout());

    CHECK(run_cli(dir, "qubo brute --instance tiny.csv -o bt.json", &out) ==
          0);
    const double brute_energy = parse_field(out, "energy");
    const double brute_cost = parse_field(out, "cost");
    CHECK(brute_cost == Catch::Approx(brute_energy).margin(1e-9));
    CHECK(load_tour_json(dir.path("bt.json")).total_cost ==
          Catch::Approx(brute_cost).margin(1e-12));

    // annealing the exported file reaches the same ground energy
    CHECK(run_cli(dir, "--seed 7 qubo solve-sa --qubo model.qubo -o b.txt",
                  &out) == 0);
    CHECK(parse_field(out, "energy") ==
          Catch::Approx(brute_energy).margin(1e-9));
    const std::string bits = read_file(dir.path("b.txt"));
    CHECK(bits.find_first_not_of("01\n") == std::string::npos);

    // with the instance attached the assignment decodes to the same tour
    CHECK(run_cli(dir, "--seed 7 qubo solve-sa --instance tiny.csv",
                  &out) == 0);
    CHECK(parse_field(out, "cost") ==
          Catch::Approx(brute_cost).margin(1e-9));

    // enumeration refuses oversized models
    REQUIRE(run_cli(dir, "--seed 1 gen --seams 5 --dirs 1 --tools 1 "
                         "--configs 1 --positions 1 -o five.csv") == 0);
    CHECK(run_cli(dir, "qubo brute --instance five.csv") == 1);
}

TEST_CASE("cli qubo solve-sa reports constraint violations with exit 2") {
    TempDir dir;
    REQUIRE(run_cli(dir, "--seed 1 gen --seams 3 --dirs 1 --tools 1 "
                         "--configs 1 --positions 1 -o t3.csv") == 0);
    write_file(dir.path("sa0.conf"),
               "sweeps 0\nseed 1\ntemp_hot 0\ntemp_cold 0\n");
    std::string out;
    CHECK(run_cli(dir,
                  "qubo solve-sa --instance t3.csv --params sa0.conf",
                  &out) == 2);
    CHECK(out.find("violation") != std::string::npos);
}

TEST_CASE("cli ttt writes one record per shot and target") {
    TempDir dir;
    REQUIRE(run_cli(dir, "--seed 1 gen --seams 4 -o f.csv") == 0);
    std::string out;
    CHECK(run_cli(dir,
                  "--seed 9 ttt --instance f.csv --solver greedy "
                  "--solver-shots 30 --targets 1e9,0 --shots 10 -o t.csv",
                  &out) == 0);
    const auto lines = lines_of(read_file(dir.path("t.csv")));
    REQUIRE(lines.size() == 21);  // header + 10 shots x 2 targets
    CHECK(lines[0] == "solver,target,shot,hit,time_seconds");
    int hits = 0;
    for (std::size_t i = 1; i < lines.size(); ++i)
        if (lines[i].find(",1,") != std::string::npos &&
            lines[i].rfind("greedy,1000000000,", 0) == 0)
            ++hits;
    CHECK(hits == 10);

    // a solver without an improvement trace cannot serve targets
    CHECK(run_cli(dir, "ttt --instance f.csv --solver qubo-sa "
                       "--targets 5 --shots 2") == 1);
}

TEST_CASE("cli sweep feeds the comparison table") {
    TempDir dir;
    REQUIRE(run_cli(dir, "--seed 5 gen --seams 5 --rate 0.9 -o a.csv") == 0);
    REQUIRE(run_cli(dir, "--seed 6 gen --seams 6 --rate 0.9 -o b.csv") == 0);
    std::string out;
    CHECK(run_cli(dir,
                  "--seed 2 sweep --instances a.csv,b.csv "
                  "--solvers greedy,brkga --solver-shots 60 --seeds 7,8 "
                  "-o sweep.csv",
                  &out) == 0);
    CHECK(out.find("8 cells, 0 failures") != std::string::npos);
    const auto rows = lines_of(read_file(dir.path("sweep.csv")));
    REQUIRE(rows.size() == 9);
    CHECK(rows[0] ==
          "instance,n_seams,solver,seed,best_cost,wall_seconds,failed,"
          "error");

    CHECK(run_cli(dir, "table --sweep sweep.csv -o table.md", &out) == 0);
    const std::string table = read_file(dir.path("table.md"));
    CHECK(table.find("| a |") != std::string::npos);
    CHECK(table.find("| b |") != std::string::npos);
    CHECK(table.find("greedy") != std::string::npos);

    // identical costs across worker settings (cells are seed-addressed)
    CHECK(run_cli(dir,
                  "--seed 2 --workers 1 sweep --instances a.csv "
                  "--solvers greedy --solver-shots 60 --seeds 7 "
                  "-o w1.csv") == 0);
    const std::string env_cmd = "RKO_ROUTE_WORKERS=4 " + kBin +
                                " --seed 2 --workers 1 sweep "
                                "--instances " +
                                dir.path("a.csv") +
                                " --solvers greedy --solver-shots 60 "
                                "--seeds 7 -o " +
                                dir.path("w4.csv") + " > /dev/null 2>&1";
    REQUIRE(std::system(env_cmd.c_str()) == 0);
    auto cost_col = [&](const std::string& file) {
        const auto rows = lines_of(read_file(dir.path(file)));
        REQUIRE(rows.size() == 2);
        // instance,n_seams,solver,seed,best_cost,...
        std::size_t start = 0;
        for (int field = 0; field < 4; ++field)
            start = rows[1].find(',', start) + 1;
        return rows[1].substr(start, rows[1].find(',', start) - start);
    };
    CHECK(cost_col("w1.csv") == cost_col("w4.csv"));

    // a sweep without the greedy baseline cannot be tabulated
    write_file(dir.path("ng.csv"),
               "instance,n_seams,solver,seed,best_cost,wall_seconds,"
               "failed,error\na,5,brkga,7,4.5,0.1,0,\"\"\n");
    CHECK(run_cli(dir, "table --sweep ng.csv") == 1);

    // a bad worker override fails fast
    const std::string bad_env = "RKO_ROUTE_WORKERS=lots " + kBin +
                                " qubo estimate --seams 2 --tools 1 "
                                "--configs 1 --positions 1 > /dev/null 2>&1";
    const int status = std::system(bad_env.c_str());
    REQUIRE(WIFEXITED(status));
    CHECK(WEXITSTATUS(status) == 1);
}
