#include "rko/dual_annealing.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>
#include <string>

#include "rko/rng.hpp"

namespace rko {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

constexpr double kTailLimit = 1e8;

void check(bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(std::string("danneal: ") + what);
}

/// Scale factor of the heavy-tailed visiting distribution at a given
/// temperature, following the generalized-annealing recipe.
double visiting_sigma(double temp, double qv) {
    const double factor1 = std::exp(std::log(temp) / (qv - 1.0));
    const double factor2 = std::exp((4.0 - qv) * std::log(qv - 1.0));
    const double factor3 =
        std::exp((2.0 - qv) * std::log(2.0) / (qv - 1.0));
    const double factor4 =
        std::sqrt(M_PI) * factor1 * factor2 / (factor3 * (3.0 - qv));
    const double factor5 = 1.0 / (qv - 1.0) - 0.5;
    const double d1 = 2.0 - factor5;
    const double factor6 = M_PI * (1.0 - factor5) /
                           std::sin(M_PI * (1.0 - factor5)) /
                           std::exp(std::lgamma(d1));
    return std::exp(-(qv - 1.0) * std::log(factor6 / factor4) / (3.0 - qv));
}

}  // namespace

void DaParams::validate() const {
    check(visit_param > 1.0 && visit_param < 3.0,
          "visit parameter must lie in (1, 3)");
    check(accept_param < 1.0, "accept parameter must lie below 1");
    check(initial_temp > 0.0, "initial temperature must be positive");
    check(restart_temp_ratio > 0.0 && restart_temp_ratio < 1.0,
          "restart temperature ratio must lie in (0, 1)");
    check(maxiter >= 1, "need at least one iteration");
    check(local_search_budget >= 0,
          "local search budget must be non-negative");
}

double temperature(int t, double initial_temp, double visit_param) {
    const double e = visit_param - 1.0;
    return initial_temp * (std::pow(2.0, e) - 1.0) /
           (std::pow(1.0 + static_cast<double>(t), e) - 1.0);
}

double acceptance_probability(double delta_e, double temp,
                              double accept_param) {
    if (delta_e <= 0.0) return 1.0;
    const double one_minus_qa = 1.0 - accept_param;
    const double bracket = 1.0 - one_minus_qa * delta_e / temp;
    if (bracket <= 0.0) return 0.0;
    const double p = std::pow(bracket, 1.0 / one_minus_qa);
    return std::min(1.0, std::max(0.0, p));
}

double wrap_key(double v) {
    double w = v - std::floor(v);
    if (w <= 0.0) w = 1.0;  // keep the domain half-open at zero
    return w;
}

Chromosome propose_jump(const Chromosome& current, double temp,
                        double visit_param, std::mt19937_64& rng) {
    const double sigma = visiting_sigma(temp, visit_param);
    const double tail_exp = (visit_param - 1.0) / (3.0 - visit_param);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> uniform(0.0, 1.0);

    Chromosome next(current.size());
    for (std::size_t i = 0; i < current.size(); ++i) {
        const double x = sigma * gauss(rng);
        const double y = gauss(rng);
        const double den =
            std::exp(tail_exp * std::log(std::max(std::abs(y), 1e-300)));
        double visit = x / den;
        if (visit > kTailLimit)
            visit = kTailLimit * uniform(rng);
        else if (visit < -kTailLimit)
            visit = -kTailLimit * uniform(rng);
        next[i] = wrap_key(current[i] + visit);
    }
    return next;
}

std::pair<Chromosome, double> local_search(const Chromosome& start,
                                           double start_cost,
                                           const Instance& inst, int budget,
                                           CostMode mode, int* used_out) {
    Chromosome best = start;
    double best_cost = start_cost;
    int used = 0;
    double step = 0.1;
    const double min_step = 1e-4;

    while (used < budget && step >= min_step) {
        bool improved = false;
        for (std::size_t i = 0; i < best.size() && used < budget; ++i) {
            for (double dir : {step, -step}) {
                if (used >= budget) break;
                Chromosome probe = best;
                probe[i] = clamp_key(probe[i] + dir);
                if (probe[i] == best[i]) continue;
                const double cost = decode(probe, inst, mode).total_cost;
                ++used;
                if (cost < best_cost) {
                    best = std::move(probe);
                    best_cost = cost;
                    improved = true;
                    break;  // keep the improved point, next coordinate
                }
            }
        }
        if (!improved) step *= 0.5;
    }
    if (used_out) *used_out = used;
    return {std::move(best), best_cost};
}

DaResult run_dual_annealing(const Instance& inst, const DaParams& params,
                            const std::optional<Chromosome>& warm,
                            CostMode mode) {
    params.validate();
    const auto start = Clock::now();
    auto rng = make_rng(params.seed);
    const std::size_t len = 5 * static_cast<std::size_t>(inst.seam_count());

    Chromosome x;
    if (warm) {
        if (warm->size() != len)
            throw std::invalid_argument(
                "danneal: warm chromosome length does not match the "
                "instance");
        validate_chromosome(*warm);
        x = *warm;
    } else {
        x = random_chromosome(len, rng);
    }

    DaResult result;
    std::uint64_t evals = 0;
    Tour tour = decode(x, inst, mode);
    ++evals;
    double cost = tour.total_cost;
    result.best = tour;
    result.best_chromosome = x;
    double incumbent = cost;
    result.improvements.push_back({seconds_since(start), incumbent});

    auto offer = [&](const Chromosome& cand, const Tour& cand_tour) {
        if (cand_tour.total_cost < incumbent) {
            incumbent = cand_tour.total_cost;
            result.best = cand_tour;
            result.best_chromosome = cand;
            result.improvements.push_back(
                {seconds_since(start), incumbent});
            return true;
        }
        return false;
    };

    const double restart_threshold =
        params.restart_temp_ratio * params.initial_temp;
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    int t_sched = 1;

    for (int iter = 1; iter <= params.maxiter; ++iter) {
        double temp =
            temperature(t_sched, params.initial_temp, params.visit_param);
        if (temp < restart_threshold) {
            // schedule clock resets and the walker re-randomizes; the
            // incumbent lives outside the walk
            t_sched = 1;
            temp = params.initial_temp;
            ++result.restarts_used;
            x = random_chromosome(len, rng);
            tour = decode(x, inst, mode);
            ++evals;
            cost = tour.total_cost;
            offer(x, tour);
        }

        Chromosome cand = propose_jump(x, temp, params.visit_param, rng);
        Tour cand_tour = decode(cand, inst, mode);
        ++evals;
        const double delta = cand_tour.total_cost - cost;
        const bool take =
            delta <= 0.0 ||
            uniform(rng) <
                acceptance_probability(delta, temp, params.accept_param);
        if (take) {
            x = std::move(cand);
            tour = std::move(cand_tour);
            cost = tour.total_cost;
            if (offer(x, tour) && params.local_search_budget > 0) {
                int used = 0;
                auto [refined, refined_cost] =
                    local_search(result.best_chromosome, incumbent, inst,
                                 params.local_search_budget, mode, &used);
                evals += static_cast<std::uint64_t>(used);
                if (refined_cost < incumbent) {
                    Tour refined_tour = decode(refined, inst, mode);
                    ++evals;
                    offer(refined, refined_tour);
                }
            }
        }

        result.trace.push_back(
            {iter, temp, cost, incumbent, seconds_since(start)});
        ++t_sched;
    }
    result.evaluations = evals;
    return result;
}

}  // namespace rko
