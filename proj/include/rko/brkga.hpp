#ifndef RKO_BRKGA_HPP
#define RKO_BRKGA_HPP

#include <cstdint>
#include <random>
#include <vector>

#include "rko/chromosome.hpp"
#include "rko/decoder.hpp"
#include "rko/instance.hpp"
#include "rko/tour.hpp"

namespace rko {

/// Biased random-key GA parameters. Fractions are of the population;
/// elite_inherit_prob is the per-key probability that an offspring key
/// comes from the elite side of the mating.
struct BrkgaParams {
    int population_size = 100;
    double elite_fraction = 0.25;     // in (0, 0.5)
    double mutant_fraction = 0.1;     // elite + mutant counts stay < pop
    double elite_inherit_prob = 0.7;  // in (0.5, 1]
    int total_parents = 2;            // >= 2
    int num_elite_parents = 1;        // >= 1 and < total_parents
    int max_generations = 100;        // evolved generations, all restarts
    int patience = 0;                 // 0 disables the stall stop
    int max_restarts = 0;
    std::uint64_t seed = 0;

    int elite_count() const;
    int mutant_count() const;
    /// Throws std::invalid_argument on any out-of-range field.
    void validate() const;
};

struct FitnessRecord {
    Chromosome chromosome;
    Tour tour;
    double cost = 0.0;
    std::uint64_t evaluation_index = 0;
};

/// Population sorted by cost ascending (ties keep insertion order).
using Population = std::vector<FitnessRecord>;

struct BrkgaHistoryRow {
    int generation = 0;     // 0 is the initial population
    double best_cost = 0.0; // incumbent, non-increasing
    double wall_seconds = 0.0;
};

struct ImprovementEvent {
    double wall_seconds = 0.0;
    double cost = 0.0;
};

struct BrkgaResult {
    Tour best;
    Chromosome best_chromosome;
    std::vector<BrkgaHistoryRow> history;
    std::vector<ImprovementEvent> improvements;
    std::uint64_t evaluations = 0;
    int restarts_used = 0;
};

/// Seed a population: warm chromosomes are copied verbatim (wrong length or
/// out-of-range keys raise), the remainder is uniform random. Decoded and
/// sorted before returning.
Population init_population(const Instance& inst, const BrkgaParams& params,
                           const std::vector<Chromosome>& warm,
                           std::mt19937_64& rng, CostMode mode,
                           std::uint64_t& eval_counter, int workers = 1);

/// Mate parents drawn from the elite and non-elite groups. Per key, the
/// elite group is chosen with probability elite_inherit_prob, then a
/// uniform member of the chosen group supplies the key.
Chromosome crossover(const std::vector<const Chromosome*>& elite_parents,
                     const std::vector<const Chromosome*>& nonelite_parents,
                     double elite_inherit_prob, std::mt19937_64& rng);

/// One generational step: copy the elite set, append fresh mutants, fill
/// the rest with offspring, re-sort. The input population must be sorted.
Population evolve_generation(const Population& pop, const Instance& inst,
                             const BrkgaParams& params, std::mt19937_64& rng,
                             CostMode mode, std::uint64_t& eval_counter,
                             int workers = 1);

/// Full run with patience-triggered restarts. The incumbent is tracked
/// outside the population and survives restarts; history gets one row per
/// generation (row 0 echoes the initial population best).
BrkgaResult run_brkga(const Instance& inst, const BrkgaParams& params,
                      const std::vector<Chromosome>& warm = {},
                      CostMode mode = CostMode::HomeAnchored, int workers = 1);

}  // namespace rko

#endif
