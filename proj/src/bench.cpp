#include "rko/bench.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "rko/parallel.hpp"
#include "rko/rng.hpp"

namespace rko {

namespace {

std::string format_cost(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string csv_quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += "\"";
    return out;
}

/// Split one CSV line; only the final field may be quoted.
std::vector<std::string> csv_split(const std::string& line,
                                   std::size_t expected) {
    std::vector<std::string> fields;
    std::size_t pos = 0;
    while (fields.size() + 1 < expected) {
        const std::size_t comma = line.find(',', pos);
        if (comma == std::string::npos)
            throw std::runtime_error("csv: too few fields");
        fields.push_back(line.substr(pos, comma - pos));
        pos = comma + 1;
    }
    std::string last = line.substr(pos);
    if (!last.empty() && last.front() == '"') {
        std::string unquoted;
        for (std::size_t i = 1; i < last.size(); ++i) {
            if (last[i] == '"') {
                if (i + 1 < last.size() && last[i + 1] == '"') {
                    unquoted += '"';
                    ++i;
                } else {
                    break;
                }
            } else {
                unquoted += last[i];
            }
        }
        last = unquoted;
    }
    fields.push_back(last);
    return fields;
}

}  // namespace

TttResult run_ttt(const SolverSpec& solver, const Instance& inst,
                  std::span<const double> targets, long shots,
                  std::uint64_t seed) {
    if (!solver.has_trace)
        throw std::invalid_argument(
            "ttt: solver `" + solver.name +
            "` records no improvement trace, cannot time targets");
    if (shots < 1)
        throw std::invalid_argument("ttt: shots must be positive");
    if (targets.empty())
        throw std::invalid_argument("ttt: need at least one target");

    TttResult result;
    result.solver = solver.name;
    result.shots = shots;
    result.records.reserve(static_cast<std::size_t>(shots) * targets.size());

    for (long shot = 0; shot < shots; ++shot) {
        SolverRun run = solver.run(
            inst, derive_seed(seed, static_cast<std::uint64_t>(shot)));
        for (double target : targets) {
            TttRecord rec;
            rec.solver = solver.name;
            rec.target = target;
            rec.shot = shot;
            for (const auto& ev : run.improvements) {
                if (ev.cost <= target) {
                    rec.hit = true;
                    rec.time_seconds = ev.wall_seconds;
                    break;
                }
            }
            result.records.push_back(rec);
        }
    }

    for (double target : targets) {
        std::vector<double> times;
        for (const auto& rec : result.records)
            if (rec.target == target && rec.hit)
                times.push_back(rec.time_seconds);
        std::sort(times.begin(), times.end());
        for (std::size_t i = 0; i < times.size(); ++i)
            result.cdf.push_back({target,
                                  static_cast<double>(i + 1) /
                                      static_cast<double>(shots),
                                  times[i]});
    }
    return result;
}

std::vector<SweepCell> run_sweep(std::span<const SweepInstance> instances,
                                 std::span<const SolverSpec> solvers,
                                 std::span<const std::uint64_t> seeds,
                                 int workers) {
    for (const auto& si : instances)
        if (si.instance == nullptr)
            throw std::invalid_argument("sweep: null instance `" + si.label +
                                        "`");
    std::vector<SweepCell> cells(instances.size() * solvers.size() *
                                 seeds.size());
    const std::size_t per_instance = solvers.size() * seeds.size();
    parallel_for(cells.size(), workers, [&](std::size_t k) {
        const std::size_t ii = k / per_instance;
        const std::size_t si = (k % per_instance) / seeds.size();
        const std::size_t di = k % seeds.size();
        SweepCell& cell = cells[k];
        cell.instance_label = instances[ii].label;
        cell.n_seams = instances[ii].instance->seam_count();
        cell.solver = solvers[si].name;
        cell.seed = seeds[di];
        try {
            SolverRun run =
                solvers[si].run(*instances[ii].instance, cell.seed);
            cell.best_cost = run.best_cost;
            cell.wall_seconds = run.wall_seconds;
        } catch (const std::exception& e) {
            cell.failed = true;
            cell.error = e.what();
        }
    });
    return cells;
}

std::vector<ComparisonRow> compare_table(std::span<const SweepCell> cells) {
    std::vector<std::string> order;
    for (const auto& c : cells)
        if (std::find(order.begin(), order.end(), c.instance_label) ==
            order.end())
            order.push_back(c.instance_label);

    std::vector<ComparisonRow> rows;
    for (const std::string& label : order) {
        ComparisonRow row;
        row.instance_label = label;
        bool have_greedy = false;
        for (const auto& c : cells) {
            if (c.instance_label != label || c.failed) continue;
            row.n_seams = c.n_seams;
            if (c.solver == "greedy") {
                if (!have_greedy || c.best_cost < row.greedy_cost)
                    row.greedy_cost = c.best_cost;
                have_greedy = true;
            } else {
                auto it = row.solver_costs.find(c.solver);
                if (it == row.solver_costs.end())
                    row.solver_costs[c.solver] = c.best_cost;
                else
                    it->second = std::min(it->second, c.best_cost);
            }
        }
        if (!have_greedy)
            throw std::invalid_argument(
                "table: instance `" + label +
                "` has no successful greedy baseline cell");
        if (row.solver_costs.empty())
            throw std::invalid_argument(
                "table: instance `" + label +
                "` has no successful non-greedy cell");
        double best_other = row.solver_costs.begin()->second;
        for (const auto& [name, cost] : row.solver_costs)
            best_other = std::min(best_other, cost);
        row.delta_seconds = row.greedy_cost - best_other;
        row.delta_percent = row.delta_seconds / row.greedy_cost * 100.0;
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string render_table_markdown(std::span<const ComparisonRow> rows) {
    std::set<std::string> solver_set;
    for (const auto& r : rows)
        for (const auto& [name, cost] : r.solver_costs)
            solver_set.insert(name);

    std::ostringstream out;
    out << "| Instance | Seams | greedy |";
    for (const auto& name : solver_set) out << " " << name << " |";
    out << " Delta (s) | Delta (%) |\n";
    out << "| --- | --- | --- |";
    for (std::size_t i = 0; i < solver_set.size(); ++i) out << " --- |";
    out << " --- | --- |\n";

    char buf[64];
    auto fmt = [&](double v) {
        std::snprintf(buf, sizeof buf, "%.2f", v);
        return std::string(buf);
    };
    for (const auto& r : rows) {
        out << "| " << r.instance_label << " | " << r.n_seams << " | "
            << fmt(r.greedy_cost) << " |";
        for (const auto& name : solver_set) {
            auto it = r.solver_costs.find(name);
            out << " " << (it == r.solver_costs.end() ? std::string("-")
                                                      : fmt(it->second))
                << " |";
        }
        out << " " << fmt(r.delta_seconds) << " | " << fmt(r.delta_percent)
            << " |\n";
    }
    return out.str();
}

void write_sweep_csv(std::span<const SweepCell> cells,
                     const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("sweep csv: cannot write " + path);
    out << "instance,n_seams,solver,seed,best_cost,wall_seconds,failed,"
           "error\n";
    for (const auto& c : cells) {
        out << c.instance_label << "," << c.n_seams << "," << c.solver << ","
            << c.seed << "," << format_cost(c.best_cost) << ","
            << format_cost(c.wall_seconds) << "," << (c.failed ? 1 : 0)
            << "," << csv_quote(c.error) << "\n";
    }
    if (!out) throw std::runtime_error("sweep csv: write failed " + path);
}

std::vector<SweepCell> load_sweep_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("sweep csv: cannot open " + path);
    std::string line;
    if (!std::getline(in, line))
        throw std::runtime_error("sweep csv: empty file " + path);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line !=
        "instance,n_seams,solver,seed,best_cost,wall_seconds,failed,error")
        throw std::runtime_error("sweep csv: unexpected header in " + path);

    std::vector<SweepCell> cells;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto f = csv_split(line, 8);
        SweepCell c;
        c.instance_label = f[0];
        c.n_seams = std::stoi(f[1]);
        c.solver = f[2];
        c.seed = std::stoull(f[3]);
        c.best_cost = std::stod(f[4]);
        c.wall_seconds = std::stod(f[5]);
        c.failed = f[6] == "1";
        c.error = f[7];
        cells.push_back(std::move(c));
    }
    return cells;
}

void write_ttt_csv(const TttResult& result, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("ttt csv: cannot write " + path);
    out << "solver,target,shot,hit,time_seconds\n";
    for (const auto& rec : result.records) {
        out << rec.solver << "," << format_cost(rec.target) << ","
            << rec.shot << "," << (rec.hit ? 1 : 0) << ","
            << format_cost(rec.hit ? rec.time_seconds : 0.0) << "\n";
    }
    if (!out) throw std::runtime_error("ttt csv: write failed " + path);
}

}  // namespace rko
