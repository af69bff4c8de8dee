#ifndef RKO_DUAL_ANNEALING_HPP
#define RKO_DUAL_ANNEALING_HPP

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "rko/brkga.hpp"  // ImprovementEvent
#include "rko/chromosome.hpp"
#include "rko/decoder.hpp"
#include "rko/instance.hpp"

namespace rko {

/// Generalized simulated annealing over the key hypercube (0,1]^N.
/// visit_param shapes the heavy-tailed jump distribution (1 < visit < 3),
/// accept_param the generalized acceptance rule (accept < 1).
struct DaParams {
    double visit_param = 2.62;
    double accept_param = -5.0;
    double initial_temp = 5230.0;
    double restart_temp_ratio = 2e-5;  // in (0, 1)
    int maxiter = 1000;
    int local_search_budget = 100;  // fitness evaluations per refinement
    std::uint64_t seed = 0;

    void validate() const;
};

/// Closed-form schedule value at step t >= 1 (t is the schedule clock,
/// which restarts reset; the global iteration budget never resets).
double temperature(int t, double initial_temp, double visit_param);

/// Probability of accepting an uphill move of size delta_e > 0 at
/// temperature temp; downhill and flat moves (delta_e <= 0) return 1.
double acceptance_probability(double delta_e, double temp,
                              double accept_param);

/// Candidate = current + per-coordinate heavy-tailed displacement, wrapped
/// periodically back into (0,1].
Chromosome propose_jump(const Chromosome& current, double temp,
                        double visit_param, std::mt19937_64& rng);

double wrap_key(double v);

/// Derivative-free refinement: coordinate pattern search with a shrinking
/// step, at most `budget` decodes, never worse than the input. Returns the
/// refined chromosome and its cost; `used` (optional) receives the number
/// of decodes spent.
std::pair<Chromosome, double> local_search(const Chromosome& start,
                                           double start_cost,
                                           const Instance& inst, int budget,
                                           CostMode mode,
                                           int* used = nullptr);

struct DaTraceRow {
    int iteration = 0;
    double temp = 0.0;
    double current_cost = 0.0;
    double incumbent_cost = 0.0;
    double wall_seconds = 0.0;
};

struct DaResult {
    Tour best;
    Chromosome best_chromosome;
    std::vector<DaTraceRow> trace;
    std::vector<ImprovementEvent> improvements;
    std::uint64_t evaluations = 0;
    int restarts_used = 0;
};

/// Anneal: jump, accept, refine, repeat; when the temperature falls below
/// restart_temp_ratio * initial_temp the schedule clock resets to 1 and the
/// position re-randomizes, keeping the incumbent.
DaResult run_dual_annealing(const Instance& inst, const DaParams& params,
                            const std::optional<Chromosome>& warm = {},
                            CostMode mode = CostMode::HomeAnchored);

}  // namespace rko

#endif
