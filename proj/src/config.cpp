#include "rko/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace rko {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t");
    return s.substr(begin, end - begin + 1);
}

[[noreturn]] void fail(const std::string& what) {
    throw std::invalid_argument("config: " + what);
}

double get_double(const ConfigMap& cfg, const std::string& key) {
    const std::string& raw = cfg.at(key);
    double v = 0.0;
    const char* first = raw.data();
    const char* last = raw.data() + raw.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last)
        fail("key `" + key + "` has non-numeric value `" + raw + "`");
    return v;
}

long long get_int(const ConfigMap& cfg, const std::string& key) {
    const std::string& raw = cfg.at(key);
    long long v = 0;
    const char* first = raw.data();
    const char* last = raw.data() + raw.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last)
        fail("key `" + key + "` has non-integer value `" + raw + "`");
    return v;
}

std::uint64_t get_u64(const ConfigMap& cfg, const std::string& key) {
    const std::string& raw = cfg.at(key);
    std::uint64_t v = 0;
    const char* first = raw.data();
    const char* last = raw.data() + raw.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last)
        fail("key `" + key + "` has non-integer value `" + raw + "`");
    return v;
}

/// Every present key must be either required or optional; every required
/// key must be present.
void check_keys(const ConfigMap& cfg, const std::set<std::string>& required,
                const std::set<std::string>& optional) {
    for (const auto& [key, value] : cfg)
        if (!required.count(key) && !optional.count(key))
            fail("unknown key `" + key + "`");
    for (const auto& key : required)
        if (!cfg.count(key)) fail("missing required key `" + key + "`");
}

}  // namespace

ConfigMap parse_config_text(const std::string& text) {
    ConfigMap cfg;
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        line = trim(line);
        if (line.empty()) continue;
        std::replace(line.begin(), line.end(), '=', ' ');
        std::istringstream row(line);
        std::string key, value, extra;
        if (!(row >> key >> value) || (row >> extra))
            fail("line " + std::to_string(line_no) +
                 ": expected `key value`");
        if (cfg.count(key))
            fail("line " + std::to_string(line_no) + ": duplicate key `" +
                 key + "`");
        cfg[key] = value;
    }
    return cfg;
}

ConfigMap load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("config: cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

BrkgaParams brkga_params_from_config(const ConfigMap& cfg) {
    check_keys(cfg,
               {"elite_percentage", "mutants_percentage", "num_generations",
                "patience", "population_size", "seed", "num_elite_parents",
                "total_parents"},
               {"elite_inherit_prob", "max_restarts"});
    BrkgaParams p;
    p.elite_fraction = get_double(cfg, "elite_percentage");
    p.mutant_fraction = get_double(cfg, "mutants_percentage");
    p.max_generations = static_cast<int>(get_int(cfg, "num_generations"));
    p.patience = static_cast<int>(get_int(cfg, "patience"));
    p.population_size = static_cast<int>(get_int(cfg, "population_size"));
    p.seed = get_u64(cfg, "seed");
    p.num_elite_parents =
        static_cast<int>(get_int(cfg, "num_elite_parents"));
    p.total_parents = static_cast<int>(get_int(cfg, "total_parents"));
    if (cfg.count("elite_inherit_prob"))
        p.elite_inherit_prob = get_double(cfg, "elite_inherit_prob");
    if (cfg.count("max_restarts"))
        p.max_restarts = static_cast<int>(get_int(cfg, "max_restarts"));
    p.validate();
    return p;
}

DaParams da_params_from_config(const ConfigMap& cfg) {
    check_keys(cfg,
               {"maxiter", "seed", "visit", "accept", "initial_temp",
                "restart_temp_ratio"},
               {"local_search_budget"});
    DaParams p;
    p.maxiter = static_cast<int>(get_int(cfg, "maxiter"));
    p.seed = get_u64(cfg, "seed");
    p.visit_param = get_double(cfg, "visit");
    p.accept_param = get_double(cfg, "accept");
    p.initial_temp = get_double(cfg, "initial_temp");
    p.restart_temp_ratio = get_double(cfg, "restart_temp_ratio");
    if (cfg.count("local_search_budget"))
        p.local_search_budget =
            static_cast<int>(get_int(cfg, "local_search_budget"));
    p.validate();
    return p;
}

GreedyParams greedy_params_from_config(const ConfigMap& cfg) {
    check_keys(cfg, {"shots", "seed"}, {});
    GreedyParams p;
    p.shots = static_cast<long>(get_int(cfg, "shots"));
    p.seed = get_u64(cfg, "seed");
    if (p.shots < 1) fail("shots must be positive");
    return p;
}

SaParams sa_params_from_config(const ConfigMap& cfg) {
    check_keys(cfg, {"sweeps", "seed", "temp_hot", "temp_cold"}, {});
    SaParams p;
    p.sweeps = static_cast<int>(get_int(cfg, "sweeps"));
    p.seed = get_u64(cfg, "seed");
    p.temp_hot = get_double(cfg, "temp_hot");
    p.temp_cold = get_double(cfg, "temp_cold");
    if (p.sweeps < 0) fail("sweeps must be non-negative");
    return p;
}

}  // namespace rko
