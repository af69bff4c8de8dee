#ifndef RKO_SERIALIZATION_HPP
#define RKO_SERIALIZATION_HPP

#include <string>
#include <vector>

#include "rko/brkga.hpp"
#include "rko/chromosome.hpp"
#include "rko/dual_annealing.hpp"
#include "rko/greedy.hpp"
#include "rko/tour.hpp"

namespace rko {

/// tour.json: {"nodes": [[s,d,t,c,p], ...], "cost": x, "feasible": b}
/// plus the original seam labels for reference. Seam fields are the dense
/// internal indices.
void save_tour_json(const Tour& tour, const Instance& inst,
                    const std::string& path);
Tour load_tour_json(const std::string& path);

/// pool.json: JSON array of key arrays. A single chromosome file may be a
/// bare JSON array or one decimal key per line.
void save_pool_json(const std::vector<Chromosome>& pool,
                    const std::string& path);
std::vector<Chromosome> load_pool_json(const std::string& path);
Chromosome load_chromosome(const std::string& path);

void write_brkga_trace_csv(const std::vector<BrkgaHistoryRow>& history,
                           const std::string& path);
void write_da_trace_csv(const std::vector<DaTraceRow>& trace,
                        const std::string& path);
void write_greedy_shots_csv(const std::vector<double>& shot_costs,
                            const std::string& path);
void write_greedy_summary_json(const GreedyResult& result,
                               const std::string& path);

/// Canonical shortest-round-trip decimal text for a double.
std::string format_double(double v);

}  // namespace rko

#endif
