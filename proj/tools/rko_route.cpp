#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "rko/bench.hpp"
#include "rko/brkga.hpp"
#include "rko/config.hpp"
#include "rko/decoder.hpp"
#include "rko/dual_annealing.hpp"
#include "rko/greedy.hpp"
#include "rko/instance.hpp"
#include "rko/parallel.hpp"
#include "rko/qubo.hpp"
#include "rko/relink.hpp"
#include "rko/rng.hpp"
#include "rko/serialization.hpp"
#include "rko/warmstart.hpp"

namespace fs = std::filesystem;
using namespace rko;

namespace {

/// Input problems (absent files, unparsable configs) are validation errors;
/// only failures past that point count as runtime errors.
[[noreturn]] void input_error(const std::string& what) {
    throw std::invalid_argument(what);
}

Instance load_instance_checked(const std::string& path) {
    try {
        return load_instance(path);
    } catch (const std::exception& e) {
        input_error(std::string("instance ") + path + ": " + e.what());
    }
}

ConfigMap load_config_checked(const std::string& path) {
    try {
        return load_config(path);
    } catch (const std::exception& e) {
        input_error(std::string("params ") + path + ": " + e.what());
    }
}

CostMode parse_mode(const std::string& name) {
    if (name == "home") return CostMode::HomeAnchored;
    if (name == "cyclic") return CostMode::Cyclic;
    input_error("unknown cost mode `" + name + "`");
}

void write_improvements_csv(const std::vector<ImprovementEvent>& events,
                            const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path);
    out << "wall_seconds,cost\n";
    for (const auto& e : events)
        out << format_double(e.wall_seconds) << ',' << format_double(e.cost)
            << '\n';
}

struct GlobalOpts {
    int workers = 0;  // 0 = all hardware threads
    std::uint64_t seed = 0;
    bool seed_given = false;
};

BrkgaParams brkga_params(const std::string& params_path,
                         const GlobalOpts& g) {
    BrkgaParams p;
    if (!params_path.empty())
        p = brkga_params_from_config(load_config_checked(params_path));
    if (g.seed_given || params_path.empty()) p.seed = g.seed;
    p.validate();
    return p;
}

DaParams da_params(const std::string& params_path, const GlobalOpts& g) {
    DaParams p;
    if (!params_path.empty())
        p = da_params_from_config(load_config_checked(params_path));
    if (g.seed_given || params_path.empty()) p.seed = g.seed;
    p.validate();
    return p;
}

GreedyParams greedy_params(const std::string& params_path,
                           const GlobalOpts& g, long shots_override) {
    GreedyParams p;
    if (!params_path.empty())
        p = greedy_params_from_config(load_config_checked(params_path));
    if (g.seed_given || params_path.empty()) p.seed = g.seed;
    if (shots_override > 0) p.shots = shots_override;
    return p;
}

SaParams sa_params(const std::string& params_path, const GlobalOpts& g) {
    SaParams p;
    if (!params_path.empty())
        p = sa_params_from_config(load_config_checked(params_path));
    if (g.seed_given || params_path.empty()) p.seed = g.seed;
    return p;
}

// ---- solve ----------------------------------------------------------------

struct SolveOpts {
    std::string solver;
    std::string instance_path;
    std::string params_path;
    std::string warmstart_path;
    std::string emit_pool_path;
    std::size_t pool_size = 10;
    long shots = 0;  // 0 = keep configured value
    std::string mode = "home";
    std::string out_dir = ".";
};

int cmd_solve(const SolveOpts& opt, const GlobalOpts& g) {
    const Instance inst = load_instance_checked(opt.instance_path);
    const CostMode mode = parse_mode(opt.mode);
    std::vector<Chromosome> warm;
    if (!opt.warmstart_path.empty()) {
        try {
            warm = load_pool_json(opt.warmstart_path);
        } catch (const std::exception& e) {
            input_error(std::string("warmstart: ") + e.what());
        }
    }
    if (!opt.emit_pool_path.empty() && opt.solver != "greedy")
        input_error("--emit-pool is only available with --solver greedy");

    fs::create_directories(opt.out_dir);
    const auto artifact = [&](const char* name) {
        return (fs::path(opt.out_dir) / name).string();
    };

    Tour best;
    if (opt.solver == "brkga") {
        BrkgaParams p = brkga_params(opt.params_path, g);
        BrkgaResult r = run_brkga(inst, p, warm, mode, g.workers);
        best = r.best;
        save_tour_json(r.best, inst, artifact("tour.json"));
        write_brkga_trace_csv(r.history, artifact("trace.csv"));
    } else if (opt.solver == "da") {
        DaParams p = da_params(opt.params_path, g);
        std::optional<Chromosome> warm_one;
        if (!warm.empty()) warm_one = warm.front();
        DaResult r = run_dual_annealing(inst, p, warm_one, mode);
        best = r.best;
        save_tour_json(r.best, inst, artifact("tour.json"));
        write_da_trace_csv(r.trace, artifact("trace.csv"));
    } else if (opt.solver == "greedy") {
        if (!warm.empty())
            input_error("--warmstart does not apply to --solver greedy");
        GreedyParams p = greedy_params(opt.params_path, g, opt.shots);
        GreedyResult r = multi_shot_greedy(inst, p, g.workers);
        best = r.best;
        save_tour_json(r.best, inst, artifact("tour.json"));
        write_improvements_csv(r.improvements, artifact("trace.csv"));
        write_greedy_shots_csv(r.shot_costs, artifact("shots.csv"));
        write_greedy_summary_json(r, artifact("summary.json"));
        if (!opt.emit_pool_path.empty()) {
            std::vector<Tour> tours =
                greedy_pool(inst, p, opt.pool_size, g.workers);
            save_pool_json(encode_pool(tours, inst, derive_seed(p.seed, 1)),
                           opt.emit_pool_path);
        }
    } else if (opt.solver == "qubo-sa") {
        if (!warm.empty())
            input_error("--warmstart does not apply to --solver qubo-sa");
        QuboProblem problem = build_qubo(inst, default_penalty(inst));
        SaResult sa = solve_sa(problem, sa_params(opt.params_path, g));
        QuboDecodeReport report =
            decode_qubo_solution(sa.assignment, problem);
        if (!report.constraints_ok()) {
            std::cerr << "qubo-sa produced no valid assignment:\n"
                      << report.summary() << '\n';
            return 2;
        }
        best = *report.tour;
        save_tour_json(best, inst, artifact("tour.json"));
        std::ofstream trace(artifact("trace.csv"));
        trace << "wall_seconds,cost\n0," << format_double(best.total_cost)
              << '\n';
    } else {
        input_error("unknown solver `" + opt.solver + "`");
    }

    std::cout << "best=" << format_double(best.total_cost)
              << " feasible=" << (best.feasible ? 1 : 0) << " artifacts="
              << opt.out_dir << '\n';
    return 0;
}

// ---- relink ---------------------------------------------------------------

struct RelinkOpts {
    std::string instance_path;
    std::string chrom_a, chrom_b;
    std::string tour_a, tour_b;
    std::size_t grid = 11;
    std::string mode = "home";
    std::string out_path;
};

int cmd_relink(const RelinkOpts& opt, const GlobalOpts& g) {
    const Instance inst = load_instance_checked(opt.instance_path);
    const CostMode mode = parse_mode(opt.mode);
    const bool chrom_in = !opt.chrom_a.empty();
    auto load_endpoint = [&](const std::string& chrom_path,
                             const std::string& tour_path,
                             std::uint64_t noise) {
        try {
            if (chrom_in) return load_chromosome(chrom_path);
            std::mt19937_64 rng = make_rng(derive_seed(g.seed, noise));
            return encode_tour(load_tour_json(tour_path), inst, rng);
        } catch (const std::exception& e) {
            input_error(std::string("endpoint: ") + e.what());
        }
    };
    const Chromosome a = load_endpoint(opt.chrom_a, opt.tour_a, 1);
    const Chromosome b = load_endpoint(opt.chrom_b, opt.tour_b, 2);
    RelinkResult r = path_relink(a, b, alpha_grid(opt.grid), inst, mode);
    std::cout << "alpha=" << format_double(r.alpha)
              << " cost=" << format_double(r.tour.total_cost) << '\n';
    if (!opt.out_path.empty()) save_tour_json(r.tour, inst, opt.out_path);
    return 0;
}

// ---- qubo -----------------------------------------------------------------

struct QuboOpts {
    // estimate
    int seams = 0, tools = 0, configs = 0, positions = 0;
    // build / solve
    std::string instance_path;
    std::string qubo_path;
    std::string params_path;
    double penalty = 0.0;  // 0 = default from the instance
    std::size_t cap = 50000;
    std::string out_path;
};

QuboProblem qubo_from_inputs(const QuboOpts& opt) {
    if (opt.instance_path.empty() == opt.qubo_path.empty())
        input_error("give exactly one of --instance or --qubo");
    if (!opt.qubo_path.empty()) {
        try {
            return load_qubo(opt.qubo_path);
        } catch (const std::exception& e) {
            input_error(std::string("qubo ") + opt.qubo_path + ": " +
                        e.what());
        }
    }
    const Instance inst = load_instance_checked(opt.instance_path);
    const double penalty =
        opt.penalty > 0.0 ? opt.penalty : default_penalty(inst);
    return build_qubo(inst, penalty, opt.cap);
}

int report_assignment(const QuboProblem& problem, const SaResult& result,
                      const std::string& out_path) {
    std::cout << "energy=" << format_double(result.energy) << '\n';
    if (!problem.has_layout()) {
        if (!out_path.empty()) {
            std::ofstream out(out_path);
            for (int bit : result.assignment) out << bit;
            out << '\n';
        }
        return 0;
    }
    QuboDecodeReport report =
        decode_qubo_solution(result.assignment, problem);
    if (!report.constraints_ok()) {
        std::cerr << report.summary() << '\n';
        return 2;
    }
    const Tour& tour = *report.tour;
    std::cout << "cost=" << format_double(tour.total_cost)
              << " feasible=" << (tour.feasible ? 1 : 0) << '\n';
    if (!out_path.empty())
        save_tour_json(tour, *problem.instance, out_path);
    return 0;
}

int cmd_qubo_estimate(const QuboOpts& opt) {
    std::cout << qubit_count_estimate(opt.seams, opt.tools, opt.configs,
                                      opt.positions)
              << '\n';
    return 0;
}

int cmd_qubo_build(const QuboOpts& opt) {
    if (opt.instance_path.empty())
        input_error("qubo build needs --instance");
    const Instance inst = load_instance_checked(opt.instance_path);
    const unsigned long long vars =
        qubo_variable_count(inst.seam_count(), inst.dims());
    if (vars > opt.cap) {
        std::cerr << "variable count " << vars << " exceeds cap " << opt.cap
                  << '\n';
        return 1;
    }
    const double penalty =
        opt.penalty > 0.0 ? opt.penalty : default_penalty(inst);
    QuboProblem problem = build_qubo(inst, penalty, opt.cap);
    save_qubo(problem, opt.out_path);
    std::cout << "n_vars=" << problem.n_vars
              << " terms=" << problem.terms.size() << " wrote "
              << opt.out_path << '\n';
    return 0;
}

int cmd_qubo_solve_sa(const QuboOpts& opt, const GlobalOpts& g) {
    QuboProblem problem = qubo_from_inputs(opt);
    SaResult result = solve_sa(problem, sa_params(opt.params_path, g));
    return report_assignment(problem, result, opt.out_path);
}

int cmd_qubo_brute(const QuboOpts& opt) {
    QuboProblem problem = qubo_from_inputs(opt);
    SaResult result = brute_force(problem);
    return report_assignment(problem, result, opt.out_path);
}

// ---- bench ----------------------------------------------------------------

SolverSpec make_solver_spec(const std::string& name,
                            const std::string& params_path,
                            const GlobalOpts& g, long shots_override,
                            CostMode mode) {
    if (name == "greedy") {
        GreedyParams base = greedy_params(params_path, g, shots_override);
        return {"greedy",
                [base](const Instance& i, std::uint64_t seed) {
                    GreedyParams p = base;
                    p.seed = seed;
                    GreedyResult r = multi_shot_greedy(i, p);
                    return SolverRun{r.best.total_cost, r.best.feasible,
                                     r.improvements, r.wall_seconds};
                },
                true};
    }
    if (name == "brkga") {
        BrkgaParams base = brkga_params(params_path, g);
        return {"brkga",
                [base, mode](const Instance& i, std::uint64_t seed) {
                    BrkgaParams p = base;
                    p.seed = seed;
                    BrkgaResult r = run_brkga(i, p, {}, mode);
                    double wall = r.history.empty()
                                      ? 0.0
                                      : r.history.back().wall_seconds;
                    return SolverRun{r.best.total_cost, r.best.feasible,
                                     r.improvements, wall};
                },
                true};
    }
    if (name == "da") {
        DaParams base = da_params(params_path, g);
        return {"da",
                [base, mode](const Instance& i, std::uint64_t seed) {
                    DaParams p = base;
                    p.seed = seed;
                    DaResult r = run_dual_annealing(i, p, {}, mode);
                    double wall =
                        r.trace.empty() ? 0.0 : r.trace.back().wall_seconds;
                    return SolverRun{r.best.total_cost, r.best.feasible,
                                     r.improvements, wall};
                },
                true};
    }
    if (name == "qubo-sa") {
        SaParams base = sa_params(params_path, g);
        return {"qubo-sa",
                [base](const Instance& i, std::uint64_t seed) {
                    QuboProblem problem = build_qubo(i, default_penalty(i));
                    SaParams p = base;
                    p.seed = seed;
                    SaResult sa = solve_sa(problem, p);
                    QuboDecodeReport report =
                        decode_qubo_solution(sa.assignment, problem);
                    if (!report.constraints_ok())
                        throw std::runtime_error(report.summary());
                    return SolverRun{report.tour->total_cost,
                                     report.tour->feasible,
                                     {},
                                     0.0};
                },
                false};
    }
    input_error("unknown solver `" + name + "`");
}

struct TttOpts {
    std::string instance_path;
    std::string solver;
    std::string params_path;
    std::vector<double> targets;
    long shots = 100;
    long shots_override = 0;  // greedy shots per run
    std::string mode = "home";
    std::string out_path = "ttt.csv";
};

int cmd_ttt(const TttOpts& opt, const GlobalOpts& g) {
    const Instance inst = load_instance_checked(opt.instance_path);
    SolverSpec spec =
        make_solver_spec(opt.solver, opt.params_path, g, opt.shots_override,
                         parse_mode(opt.mode));
    TttResult result =
        run_ttt(spec, inst, opt.targets, opt.shots, g.seed);
    write_ttt_csv(result, opt.out_path);
    std::cout << "wrote " << opt.out_path << " (" << result.cdf.size()
              << " cdf points)\n";
    return 0;
}

struct SweepOpts {
    std::vector<std::string> instance_paths;
    std::vector<std::string> solvers;
    std::string brkga_params, da_params_path, greedy_params_path,
        sa_params_path;
    std::vector<std::uint64_t> seeds;
    long runs = 0;  // alternative to --seeds: derive this many from --seed
    long shots_override = 0;
    std::string mode = "home";
    std::string out_path = "sweep.csv";
};

int cmd_sweep(const SweepOpts& opt, const GlobalOpts& g) {
    if (opt.instance_paths.empty()) input_error("no instances given");
    if (opt.solvers.empty()) input_error("no solvers given");
    std::vector<std::uint64_t> seeds = opt.seeds;
    for (long r = 0; r < opt.runs; ++r)
        seeds.push_back(derive_seed(g.seed, static_cast<std::uint64_t>(r)));
    if (seeds.empty()) input_error("give --seeds or --runs");

    std::vector<Instance> storage;
    storage.reserve(opt.instance_paths.size());
    std::vector<SweepInstance> instances;
    for (const std::string& path : opt.instance_paths) {
        storage.push_back(load_instance_checked(path));
        instances.push_back(
            {fs::path(path).stem().string(), &storage.back()});
    }

    const CostMode mode = parse_mode(opt.mode);
    std::vector<SolverSpec> specs;
    for (const std::string& name : opt.solvers) {
        std::string params;
        if (name == "brkga") params = opt.brkga_params;
        if (name == "da") params = opt.da_params_path;
        if (name == "greedy") params = opt.greedy_params_path;
        if (name == "qubo-sa") params = opt.sa_params_path;
        specs.push_back(
            make_solver_spec(name, params, g, opt.shots_override, mode));
    }

    std::vector<SweepCell> cells =
        run_sweep(instances, specs, seeds, resolve_workers(g.workers));
    write_sweep_csv(cells, opt.out_path);
    const long failures = static_cast<long>(
        std::count_if(cells.begin(), cells.end(),
                      [](const SweepCell& c) { return c.failed; }));
    std::cout << "wrote " << opt.out_path << " (" << cells.size()
              << " cells, " << failures << " failures)\n";
    return 0;
}

struct TableOpts {
    std::string sweep_path;
    std::string out_path;
};

int cmd_table(const TableOpts& opt) {
    std::vector<SweepCell> cells;
    try {
        cells = load_sweep_csv(opt.sweep_path);
    } catch (const std::exception& e) {
        input_error(std::string("sweep ") + opt.sweep_path + ": " +
                    e.what());
    }
    std::vector<ComparisonRow> rows = compare_table(cells);
    const std::string text = render_table_markdown(rows);
    if (opt.out_path.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(opt.out_path);
        if (!out) throw std::runtime_error("cannot open " + opt.out_path);
        out << text;
        std::cout << "wrote " << opt.out_path << '\n';
    }
    return 0;
}

// ---- instance management --------------------------------------------------

struct GenOpts {
    GeneratorParams params;
    std::string out_path;
};

int cmd_gen(GenOpts opt, const GlobalOpts& g) {
    opt.params.seed = g.seed;
    const Instance inst = generate_synthetic(opt.params);
    save_instance(inst, opt.out_path);
    std::cout << "wrote " << opt.out_path
              << ": n_seams=" << inst.seam_count()
              << " nodes=" << inst.node_count()
              << " rows=" << inst.row_count() << '\n';
    return 0;
}

struct DownsampleOpts {
    std::string instance_path;
    int keep = 0;
    std::string out_path;
};

int cmd_downsample(const DownsampleOpts& opt, const GlobalOpts& g) {
    const Instance inst = load_instance_checked(opt.instance_path);
    const Instance small = downsample(inst, opt.keep, g.seed);
    save_instance(small, opt.out_path);
    std::cout << "wrote " << opt.out_path
              << ": n_seams=" << small.seam_count()
              << " rows=" << small.row_count() << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Random-key toolkit for composite-node tour sequencing"};
    app.require_subcommand(1);

    GlobalOpts g;
    auto* seed_opt =
        app.add_option("--seed", g.seed, "Master seed (default 0)");
    app.add_option("--workers", g.workers,
                   "Worker threads, 0 = all cores; the RKO_ROUTE_WORKERS "
                   "environment variable overrides this flag");

    GenOpts gen;
    auto* sub_gen = app.add_subcommand("gen", "Generate a synthetic workcell");
    sub_gen->add_option("--seams", gen.params.n_seams, "Seam count")
        ->required();
    sub_gen->add_option("--dirs", gen.params.dims.directions, "Directions");
    sub_gen->add_option("--tools", gen.params.dims.tools, "Tools");
    sub_gen->add_option("--configs", gen.params.dims.configs,
                        "Arm configurations");
    sub_gen->add_option("--positions", gen.params.dims.positions,
                        "Workpiece positions");
    sub_gen->add_option("--rate", gen.params.feasibility_rate,
                        "Fraction of node pairs kept");
    sub_gen->add_option("--scale", gen.params.cost_scale,
                        "Seconds per workcell length unit");
    sub_gen->add_option("-o,--output", gen.out_path, "Output cost file")
        ->required();

    DownsampleOpts down;
    auto* sub_down =
        app.add_subcommand("downsample", "Keep a random seam subset");
    sub_down->add_option("--instance", down.instance_path, "Cost file")
        ->required();
    sub_down->add_option("--keep", down.keep, "Seams to keep")->required();
    sub_down->add_option("-o,--output", down.out_path, "Output cost file")
        ->required();

    SolveOpts solve;
    auto* sub_solve = app.add_subcommand("solve", "Run one solver");
    sub_solve
        ->add_option("--solver", solve.solver,
                     "brkga | da | greedy | qubo-sa")
        ->required();
    sub_solve->add_option("--instance", solve.instance_path, "Cost file")
        ->required();
    sub_solve->add_option("--params", solve.params_path,
                          "Solver parameter file");
    sub_solve->add_option("--warmstart", solve.warmstart_path,
                          "pool.json of starting chromosomes");
    sub_solve->add_option("--emit-pool", solve.emit_pool_path,
                          "Write the best greedy tours as pool.json");
    sub_solve->add_option("--pool-size", solve.pool_size,
                          "Tours in the emitted pool");
    sub_solve->add_option("--shots", solve.shots, "Greedy restarts");
    sub_solve->add_option("--mode", solve.mode, "home | cyclic");
    sub_solve->add_option("--out-dir", solve.out_dir,
                          "Artifact directory (tour.json, trace.csv)");

    RelinkOpts relink;
    auto* sub_relink =
        app.add_subcommand("relink", "Scan the segment between two points");
    sub_relink->add_option("--instance", relink.instance_path, "Cost file")
        ->required();
    sub_relink->add_option("--chrom-a", relink.chrom_a, "Chromosome file");
    sub_relink->add_option("--chrom-b", relink.chrom_b, "Chromosome file");
    sub_relink->add_option("--tour-a", relink.tour_a, "tour.json");
    sub_relink->add_option("--tour-b", relink.tour_b, "tour.json");
    sub_relink->add_option("--grid", relink.grid, "Grid points (>= 2)");
    sub_relink->add_option("--mode", relink.mode, "home | cyclic");
    sub_relink->add_option("-o,--output", relink.out_path,
                           "Best tour output");

    QuboOpts qubo;
    auto* sub_qubo =
        app.add_subcommand("qubo", "Binary quadratic model tooling");
    sub_qubo->require_subcommand(1);
    auto* sub_est = sub_qubo->add_subcommand(
        "estimate", "Print the hardware variable-count estimate");
    sub_est->add_option("--seams", qubo.seams, "Seam count")->required();
    sub_est->add_option("--tools", qubo.tools, "Tools")->required();
    sub_est->add_option("--configs", qubo.configs, "Arm configurations")
        ->required();
    sub_est->add_option("--positions", qubo.positions,
                        "Workpiece positions")
        ->required();
    auto* sub_build =
        sub_qubo->add_subcommand("build", "Write the sparse coefficients");
    sub_build->add_option("--instance", qubo.instance_path, "Cost file")
        ->required();
    sub_build->add_option("--penalty", qubo.penalty,
                          "Constraint weight, 0 = derive from costs");
    sub_build->add_option("--cap", qubo.cap, "Refuse more variables");
    sub_build->add_option("-o,--output", qubo.out_path, "Output file")
        ->required();
    auto* sub_sa = sub_qubo->add_subcommand(
        "solve-sa", "Anneal bit flips over the model");
    sub_sa->add_option("--instance", qubo.instance_path, "Cost file");
    sub_sa->add_option("--qubo", qubo.qubo_path, "Sparse coefficient file");
    sub_sa->add_option("--params", qubo.params_path, "SA parameter file");
    sub_sa->add_option("--penalty", qubo.penalty,
                       "Constraint weight, 0 = derive from costs");
    sub_sa->add_option("--cap", qubo.cap, "Refuse more variables");
    sub_sa->add_option("-o,--output", qubo.out_path,
                       "Tour (or raw assignment) output");
    auto* sub_brute = sub_qubo->add_subcommand(
        "brute", "Exact minimum by enumeration (<= 24 variables)");
    sub_brute->add_option("--instance", qubo.instance_path, "Cost file");
    sub_brute->add_option("--qubo", qubo.qubo_path,
                          "Sparse coefficient file");
    sub_brute->add_option("--penalty", qubo.penalty,
                          "Constraint weight, 0 = derive from costs");
    sub_brute->add_option("--cap", qubo.cap, "Refuse more variables");
    sub_brute->add_option("-o,--output", qubo.out_path,
                          "Tour (or raw assignment) output");

    TttOpts ttt;
    auto* sub_ttt =
        app.add_subcommand("ttt", "Time-to-target empirical CDF");
    sub_ttt->add_option("--instance", ttt.instance_path, "Cost file")
        ->required();
    sub_ttt->add_option("--solver", ttt.solver,
                        "greedy | brkga | da (needs an improvement trace)")
        ->required();
    sub_ttt->add_option("--params", ttt.params_path,
                        "Solver parameter file");
    sub_ttt->add_option("--targets", ttt.targets, "Target costs")
        ->required()
        ->delimiter(',');
    sub_ttt->add_option("--shots", ttt.shots, "Independent runs");
    sub_ttt->add_option("--solver-shots", ttt.shots_override,
                        "Greedy restarts per run");
    sub_ttt->add_option("--mode", ttt.mode, "home | cyclic");
    sub_ttt->add_option("-o,--output", ttt.out_path, "CSV output");

    SweepOpts sweep;
    auto* sub_sweep =
        app.add_subcommand("sweep", "Instances x solvers x seeds grid");
    sub_sweep
        ->add_option("--instances", sweep.instance_paths, "Cost files")
        ->required()
        ->delimiter(',');
    sub_sweep->add_option("--solvers", sweep.solvers, "Solver names")
        ->required()
        ->delimiter(',');
    sub_sweep->add_option("--brkga-params", sweep.brkga_params,
                          "BRKGA parameter file");
    sub_sweep->add_option("--da-params", sweep.da_params_path,
                          "Dual annealing parameter file");
    sub_sweep->add_option("--greedy-params", sweep.greedy_params_path,
                          "Greedy parameter file");
    sub_sweep->add_option("--sa-params", sweep.sa_params_path,
                          "QUBO SA parameter file");
    sub_sweep->add_option("--seeds", sweep.seeds, "Explicit seed list")
        ->delimiter(',');
    sub_sweep->add_option("--runs", sweep.runs,
                          "Derive this many seeds from --seed");
    sub_sweep->add_option("--solver-shots", sweep.shots_override,
                          "Greedy restarts per cell");
    sub_sweep->add_option("--mode", sweep.mode, "home | cyclic");
    sub_sweep->add_option("-o,--output", sweep.out_path, "CSV output");

    TableOpts table;
    auto* sub_table = app.add_subcommand(
        "table", "Greedy-baseline comparison from a sweep CSV");
    sub_table->add_option("--sweep", table.sweep_path, "sweep.csv")
        ->required();
    sub_table->add_option("-o,--output", table.out_path,
                          "Markdown output (stdout when omitted)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }
    g.seed_given = seed_opt->count() > 0;
    if (const char* env = std::getenv("RKO_ROUTE_WORKERS")) {
        try {
            g.workers = std::stoi(env);
        } catch (const std::exception&) {
            std::cerr << "RKO_ROUTE_WORKERS is not a number: " << env
                      << '\n';
            return 1;
        }
    }
    g.workers = resolve_workers(g.workers);

    try {
        if (app.got_subcommand(sub_gen)) return cmd_gen(gen, g);
        if (app.got_subcommand(sub_down)) return cmd_downsample(down, g);
        if (app.got_subcommand(sub_solve)) return cmd_solve(solve, g);
        if (app.got_subcommand(sub_relink)) return cmd_relink(relink, g);
        if (app.got_subcommand(sub_qubo)) {
            if (sub_qubo->got_subcommand(sub_est))
                return cmd_qubo_estimate(qubo);
            if (sub_qubo->got_subcommand(sub_build))
                return cmd_qubo_build(qubo);
            if (sub_qubo->got_subcommand(sub_sa))
                return cmd_qubo_solve_sa(qubo, g);
            return cmd_qubo_brute(qubo);
        }
        if (app.got_subcommand(sub_ttt)) return cmd_ttt(ttt, g);
        if (app.got_subcommand(sub_sweep)) return cmd_sweep(sweep, g);
        return cmd_table(table);
    } catch (const std::logic_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "failure: " << e.what() << '\n';
        return 2;
    }
}
