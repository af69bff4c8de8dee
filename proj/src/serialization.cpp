#include "rko/serialization.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "rko/instance.hpp"

namespace rko {

namespace {

using nlohmann::json;

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void spill(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path);
    out << text;
    if (!out) throw std::runtime_error("write failed: " + path);
}

json parse_json(const std::string& path) {
    const std::string text = slurp(path);
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded())
        throw std::runtime_error("invalid JSON in " + path);
    return j;
}

Chromosome keys_from_json(const json& arr, const std::string& path) {
    if (!arr.is_array())
        throw std::runtime_error(path + ": expected an array of keys");
    Chromosome keys;
    keys.reserve(arr.size());
    for (const auto& v : arr) {
        if (!v.is_number())
            throw std::runtime_error(path + ": non-numeric key");
        keys.push_back(v.get<double>());
    }
    return keys;
}

}  // namespace

void save_tour_json(const Tour& tour, const Instance& inst,
                    const std::string& path) {
    json nodes = json::array();
    for (const Node& n : tour.nodes)
        nodes.push_back({n.seam, n.direction, n.tool, n.config, n.position});
    json j{{"nodes", std::move(nodes)},
           {"cost", tour.total_cost},
           {"feasible", tour.feasible},
           {"seam_labels", inst.seam_labels()}};
    spill(path, j.dump(2) + "\n");
}

Tour load_tour_json(const std::string& path) {
    const json j = parse_json(path);
    if (!j.is_object() || !j.contains("nodes") || !j.contains("cost") ||
        !j.contains("feasible") || !j["nodes"].is_array())
        throw std::runtime_error(path + ": not a tour file");
    Tour tour;
    for (const auto& entry : j["nodes"]) {
        if (!entry.is_array() || entry.size() != 5)
            throw std::runtime_error(path + ": node needs 5 coordinates");
        tour.nodes.push_back(Node{entry[0].get<int>(), entry[1].get<int>(),
                                  entry[2].get<int>(), entry[3].get<int>(),
                                  entry[4].get<int>()});
    }
    tour.total_cost = j["cost"].get<double>();
    tour.feasible = j["feasible"].get<bool>();
    return tour;
}

void save_pool_json(const std::vector<Chromosome>& pool,
                    const std::string& path) {
    json j = json::array();
    for (const Chromosome& keys : pool) j.push_back(keys);
    spill(path, j.dump() + "\n");
}

std::vector<Chromosome> load_pool_json(const std::string& path) {
    const json j = parse_json(path);
    if (!j.is_array())
        throw std::runtime_error(path + ": expected an array of chromosomes");
    std::vector<Chromosome> pool;
    pool.reserve(j.size());
    for (const auto& entry : j) pool.push_back(keys_from_json(entry, path));
    return pool;
}

Chromosome load_chromosome(const std::string& path) {
    const std::string text = slurp(path);
    auto it = text.begin();
    while (it != text.end() && std::isspace(static_cast<unsigned char>(*it)))
        ++it;
    if (it != text.end() && *it == '[') {
        json j = json::parse(text, nullptr, false);
        if (j.is_discarded())
            throw std::runtime_error("invalid JSON in " + path);
        return keys_from_json(j, path);
    }
    Chromosome keys;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        const auto begin = line.find_first_not_of(" \t\r");
        if (begin == std::string::npos) continue;
        const auto end = line.find_last_not_of(" \t\r");
        const char* first = line.data() + begin;
        const char* last = line.data() + end + 1;
        double v = 0.0;
        auto [ptr, ec] = std::from_chars(first, last, v);
        if (ec != std::errc{} || ptr != last)
            throw std::runtime_error(path + ": bad key line `" + line + "`");
        keys.push_back(v);
    }
    return keys;
}

void write_brkga_trace_csv(const std::vector<BrkgaHistoryRow>& history,
                           const std::string& path) {
    std::ostringstream out;
    out << "generation,best_cost,wall_seconds\n";
    for (const auto& row : history)
        out << row.generation << ',' << format_double(row.best_cost) << ','
            << format_double(row.wall_seconds) << '\n';
    spill(path, out.str());
}

void write_da_trace_csv(const std::vector<DaTraceRow>& trace,
                        const std::string& path) {
    std::ostringstream out;
    out << "iteration,temperature,current_cost,incumbent_cost,wall_seconds\n";
    for (const auto& row : trace)
        out << row.iteration << ',' << format_double(row.temp) << ','
            << format_double(row.current_cost) << ','
            << format_double(row.incumbent_cost) << ','
            << format_double(row.wall_seconds) << '\n';
    spill(path, out.str());
}

void write_greedy_shots_csv(const std::vector<double>& shot_costs,
                            const std::string& path) {
    std::ostringstream out;
    out << "shot,cost\n";
    for (std::size_t i = 0; i < shot_costs.size(); ++i)
        out << i << ',' << format_double(shot_costs[i]) << '\n';
    spill(path, out.str());
}

void write_greedy_summary_json(const GreedyResult& result,
                               const std::string& path) {
    double median = 0.0;
    if (!result.shot_costs.empty()) {
        std::vector<double> sorted = result.shot_costs;
        std::sort(sorted.begin(), sorted.end());
        const std::size_t mid = sorted.size() / 2;
        median = (sorted.size() % 2 == 1)
                     ? sorted[mid]
                     : 0.5 * (sorted[mid - 1] + sorted[mid]);
    }
    json j{{"best_cost", result.best.total_cost},
           {"median_cost", median},
           {"feasible", result.best.feasible},
           {"best_shot", result.best_shot},
           {"shots", result.shot_costs.size()},
           {"wall_seconds", result.wall_seconds}};
    spill(path, j.dump(2) + "\n");
}

std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    if (ec != std::errc{}) throw std::runtime_error("format_double failed");
    return std::string(buf, ptr);
}

}  // namespace rko
