#ifndef RKO_CONFIG_HPP
#define RKO_CONFIG_HPP

#include <map>
#include <string>

#include "rko/brkga.hpp"
#include "rko/dual_annealing.hpp"
#include "rko/greedy.hpp"
#include "rko/qubo.hpp"

namespace rko {

/// Flat key-value solver configuration: one `key value` (or `key=value`)
/// pair per line, `#` comments. Unknown keys are rejected so typos fail
/// loudly.
using ConfigMap = std::map<std::string, std::string>;

ConfigMap parse_config_text(const std::string& text);
ConfigMap load_config(const std::string& path);

/// Keys: elite_percentage, mutants_percentage, num_generations, patience,
/// population_size, seed, num_elite_parents, total_parents, and optionally
/// elite_inherit_prob, max_restarts.
BrkgaParams brkga_params_from_config(const ConfigMap& cfg);

/// Keys: maxiter, seed, visit, accept, initial_temp, restart_temp_ratio,
/// and optionally local_search_budget.
DaParams da_params_from_config(const ConfigMap& cfg);

/// Keys: shots, seed.
GreedyParams greedy_params_from_config(const ConfigMap& cfg);

/// Keys: sweeps, seed, temp_hot, temp_cold.
SaParams sa_params_from_config(const ConfigMap& cfg);

}  // namespace rko

#endif
