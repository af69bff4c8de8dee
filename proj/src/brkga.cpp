#include "rko/brkga.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>
#include <string>

#include "rko/parallel.hpp"
#include "rko/rng.hpp"

namespace rko {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

constexpr double kStallTolerance = 1e-9;

void check(bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(std::string("brkga: ") + what);
}

/// Draw `count` distinct indices from [lo, hi) via a partial shuffle.
std::vector<int> sample_distinct(int lo, int hi, int count,
                                 std::mt19937_64& rng) {
    std::vector<int> all(static_cast<std::size_t>(hi - lo));
    for (int i = lo; i < hi; ++i) all[static_cast<std::size_t>(i - lo)] = i;
    for (int i = 0; i < count; ++i) {
        std::uniform_int_distribution<int> pick(i,
                                                static_cast<int>(all.size()) -
                                                    1);
        std::swap(all[static_cast<std::size_t>(i)],
                  all[static_cast<std::size_t>(pick(rng))]);
    }
    all.resize(static_cast<std::size_t>(count));
    return all;
}

/// Decode freshly generated chromosomes (appended after `keep` survivors)
/// and restore cost order.
void finish_population(Population& pop, std::size_t keep, const Instance& inst,
                       CostMode mode, std::uint64_t& eval_counter,
                       int workers) {
    const std::size_t fresh = pop.size() - keep;
    for (std::size_t i = 0; i < fresh; ++i)
        pop[keep + i].evaluation_index = eval_counter++;
    parallel_for(fresh, workers, [&](std::size_t i) {
        FitnessRecord& r = pop[keep + i];
        r.tour = decode(r.chromosome, inst, mode);
        r.cost = r.tour.total_cost;
    });
    std::stable_sort(pop.begin(), pop.end(),
                     [](const FitnessRecord& a, const FitnessRecord& b) {
                         return a.cost < b.cost;
                     });
}

}  // namespace

int BrkgaParams::elite_count() const {
    return std::max(
        1, static_cast<int>(std::floor(elite_fraction * population_size)));
}

int BrkgaParams::mutant_count() const {
    return static_cast<int>(std::floor(mutant_fraction * population_size));
}

void BrkgaParams::validate() const {
    check(population_size >= 3, "population must hold at least 3 members");
    check(elite_fraction > 0.0 && elite_fraction < 0.5,
          "elite fraction must lie in (0, 0.5)");
    check(mutant_fraction >= 0.0 && mutant_fraction < 1.0,
          "mutant fraction must lie in [0, 1)");
    check(elite_count() + mutant_count() < population_size,
          "elite plus mutants must leave room for offspring");
    check(2 * elite_count() < population_size,
          "elite set must stay below half the population");
    check(elite_inherit_prob > 0.5 && elite_inherit_prob <= 1.0,
          "elite inheritance probability must lie in (0.5, 1]");
    check(total_parents >= 2, "crossover needs at least 2 parents");
    check(num_elite_parents >= 1 && num_elite_parents < total_parents,
          "elite parents must number in [1, total_parents)");
    check(num_elite_parents <= elite_count(),
          "not enough elite members to supply the elite parents");
    check(total_parents - num_elite_parents <=
              population_size - elite_count(),
          "not enough non-elite members to supply the other parents");
    check(max_generations >= 1, "need at least one generation");
    check(patience >= 0, "patience must be non-negative");
    check(max_restarts >= 0, "restart budget must be non-negative");
}

Population init_population(const Instance& inst, const BrkgaParams& params,
                           const std::vector<Chromosome>& warm,
                           std::mt19937_64& rng, CostMode mode,
                           std::uint64_t& eval_counter, int workers) {
    params.validate();
    const std::size_t pop_size =
        static_cast<std::size_t>(params.population_size);
    const std::size_t len = 5 * static_cast<std::size_t>(inst.seam_count());
    if (warm.size() > pop_size)
        throw std::invalid_argument(
            "brkga: more warm chromosomes than population slots");
    for (const Chromosome& w : warm) {
        if (w.size() != len)
            throw std::invalid_argument(
                "brkga: warm chromosome length does not match the instance");
        validate_chromosome(w);
    }

    Population pop;
    pop.reserve(pop_size);
    for (const Chromosome& w : warm) pop.push_back({w, {}, 0.0, 0});
    while (pop.size() < pop_size)
        pop.push_back({random_chromosome(len, rng), {}, 0.0, 0});
    finish_population(pop, 0, inst, mode, eval_counter, workers);
    return pop;
}

Chromosome crossover(const std::vector<const Chromosome*>& elite_parents,
                     const std::vector<const Chromosome*>& nonelite_parents,
                     double elite_inherit_prob, std::mt19937_64& rng) {
    if (elite_parents.empty() || nonelite_parents.empty())
        throw std::invalid_argument("brkga: both parent groups must be "
                                    "non-empty");
    const std::size_t len = elite_parents.front()->size();
    for (const auto* p : elite_parents)
        if (p->size() != len)
            throw std::invalid_argument("brkga: parent lengths differ");
    for (const auto* p : nonelite_parents)
        if (p->size() != len)
            throw std::invalid_argument("brkga: parent lengths differ");

    std::uniform_real_distribution<double> coin(0.0, 1.0);
    Chromosome child(len);
    for (std::size_t i = 0; i < len; ++i) {
        const bool take_elite = coin(rng) < elite_inherit_prob;
        const auto& group = take_elite ? elite_parents : nonelite_parents;
        std::size_t member = 0;
        if (group.size() > 1) {
            std::uniform_int_distribution<std::size_t> pick(
                0, group.size() - 1);
            member = pick(rng);
        }
        child[i] = (*group[member])[i];
    }
    return child;
}

Population evolve_generation(const Population& pop, const Instance& inst,
                             const BrkgaParams& params, std::mt19937_64& rng,
                             CostMode mode, std::uint64_t& eval_counter,
                             int workers) {
    params.validate();
    if (pop.size() != static_cast<std::size_t>(params.population_size))
        throw std::invalid_argument(
            "brkga: population size does not match the parameters");
    const int elite = params.elite_count();
    const int mutants = params.mutant_count();
    const int offspring = params.population_size - elite - mutants;
    const std::size_t len = 5 * static_cast<std::size_t>(inst.seam_count());

    Population next;
    next.reserve(pop.size());
    for (int i = 0; i < elite; ++i)
        next.push_back(pop[static_cast<std::size_t>(i)]);
    for (int i = 0; i < mutants; ++i)
        next.push_back({random_chromosome(len, rng), {}, 0.0, 0});
    for (int i = 0; i < offspring; ++i) {
        auto elite_idx =
            sample_distinct(0, elite, params.num_elite_parents, rng);
        auto other_idx =
            sample_distinct(elite, params.population_size,
                            params.total_parents - params.num_elite_parents,
                            rng);
        std::vector<const Chromosome*> elite_parents, other_parents;
        for (int e : elite_idx)
            elite_parents.push_back(
                &pop[static_cast<std::size_t>(e)].chromosome);
        for (int o : other_idx)
            other_parents.push_back(
                &pop[static_cast<std::size_t>(o)].chromosome);
        next.push_back({crossover(elite_parents, other_parents,
                                  params.elite_inherit_prob, rng),
                        {},
                        0.0,
                        0});
    }
    finish_population(next, static_cast<std::size_t>(elite), inst, mode,
                      eval_counter, workers);
    return next;
}

BrkgaResult run_brkga(const Instance& inst, const BrkgaParams& params,
                      const std::vector<Chromosome>& warm, CostMode mode,
                      int workers) {
    params.validate();
    const auto start = Clock::now();
    auto rng = make_rng(params.seed);
    std::uint64_t evals = 0;

    Population pop =
        init_population(inst, params, warm, rng, mode, evals, workers);

    BrkgaResult result;
    result.best = pop[0].tour;
    result.best_chromosome = pop[0].chromosome;
    double incumbent = pop[0].cost;
    result.history.push_back({0, incumbent, seconds_since(start)});
    result.improvements.push_back({seconds_since(start), incumbent});

    int stall = 0;
    for (int gen = 1; gen <= params.max_generations; ++gen) {
        pop = evolve_generation(pop, inst, params, rng, mode, evals, workers);
        const bool significant = incumbent - pop[0].cost > kStallTolerance;
        if (pop[0].cost < incumbent) {
            incumbent = pop[0].cost;
            result.best = pop[0].tour;
            result.best_chromosome = pop[0].chromosome;
            result.improvements.push_back(
                {seconds_since(start), incumbent});
        }
        result.history.push_back({gen, incumbent, seconds_since(start)});

        stall = significant ? 0 : stall + 1;
        if (params.patience > 0 && stall >= params.patience) {
            if (result.restarts_used >= params.max_restarts) break;
            ++result.restarts_used;
            stall = 0;
            // fresh random population; the incumbent survives outside it
            pop = init_population(inst, params, {}, rng, mode, evals,
                                  workers);
            if (pop[0].cost < incumbent) {
                incumbent = pop[0].cost;
                result.best = pop[0].tour;
                result.best_chromosome = pop[0].chromosome;
                result.improvements.push_back(
                    {seconds_since(start), incumbent});
            }
        }
    }
    result.evaluations = evals;
    return result;
}

}  // namespace rko
