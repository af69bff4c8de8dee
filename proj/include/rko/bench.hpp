#ifndef RKO_BENCH_HPP
#define RKO_BENCH_HPP

#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "rko/brkga.hpp"  // ImprovementEvent
#include "rko/instance.hpp"

namespace rko {

/// One solver execution: final cost plus the incumbent improvement trace
/// (wall time measured inside the solver, instance loading excluded).
struct SolverRun {
    double best_cost = 0.0;
    bool feasible = false;
    std::vector<ImprovementEvent> improvements;
    double wall_seconds = 0.0;
};

struct SolverSpec {
    std::string name;
    std::function<SolverRun(const Instance&, std::uint64_t seed)> run;
    bool has_trace = true;  // false: cannot serve time-to-target plots
};

struct TttRecord {
    std::string solver;
    double target = 0.0;
    long shot = 0;
    bool hit = false;
    double time_seconds = 0.0;  // valid when hit
};

struct TttCdfPoint {
    double target = 0.0;
    double probability = 0.0;  // i / shots at the i-th sorted hit time
    double time_seconds = 0.0;
};

struct TttResult {
    std::string solver;
    long shots = 0;
    std::vector<TttRecord> records;    // shots x targets
    std::vector<TttCdfPoint> cdf;      // sorted by (target, time)
};

/// Run `shots` independent executions (seed stream per shot) and record,
/// per target, the first wall time at which the incumbent reached it.
/// Throws std::invalid_argument for a solver without trace support.
TttResult run_ttt(const SolverSpec& solver, const Instance& inst,
                  std::span<const double> targets, long shots,
                  std::uint64_t seed);

struct SweepInstance {
    std::string label;
    const Instance* instance = nullptr;
};

struct SweepCell {
    std::string instance_label;
    int n_seams = 0;
    std::string solver;
    std::uint64_t seed = 0;
    double best_cost = 0.0;
    double wall_seconds = 0.0;
    bool failed = false;
    std::string error;
};

/// Full factorial instances x solvers x seeds. A failing cell is recorded
/// with its error message and the sweep continues.
std::vector<SweepCell> run_sweep(std::span<const SweepInstance> instances,
                                 std::span<const SolverSpec> solvers,
                                 std::span<const std::uint64_t> seeds,
                                 int workers = 1);

struct ComparisonRow {
    std::string instance_label;
    int n_seams = 0;
    double greedy_cost = 0.0;
    std::map<std::string, double> solver_costs;  // best per non-greedy solver
    double delta_seconds = 0.0;   // greedy - best other
    double delta_percent = 0.0;   // delta / greedy * 100
};

/// Per-instance best costs with the greedy baseline column; requires at
/// least one greedy cell and one non-greedy cell per instance.
std::vector<ComparisonRow> compare_table(std::span<const SweepCell> cells);

std::string render_table_markdown(std::span<const ComparisonRow> rows);

void write_sweep_csv(std::span<const SweepCell> cells,
                     const std::string& path);
std::vector<SweepCell> load_sweep_csv(const std::string& path);
void write_ttt_csv(const TttResult& result, const std::string& path);

}  // namespace rko

#endif
