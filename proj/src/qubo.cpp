#include "rko/qubo.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "rko/decoder.hpp"
#include "rko/rng.hpp"

namespace rko {

namespace {

/// Sparse symmetric view used by the flip-based solvers: diagonal weights
/// plus per-variable adjacency of off-diagonal terms.
struct FlipModel {
    std::vector<double> diag;
    std::vector<std::vector<std::pair<std::uint32_t, double>>> adjacent;

    explicit FlipModel(const QuboProblem& q) {
        diag.assign(q.n_vars, 0.0);
        adjacent.assign(q.n_vars, {});
        for (const auto& t : q.terms) {
            if (t.i == t.j) {
                diag[t.i] += t.weight;
            } else {
                adjacent[t.i].emplace_back(t.j, t.weight);
                adjacent[t.j].emplace_back(t.i, t.weight);
            }
        }
    }

    /// Energy change of flipping variable v in assignment x.
    double flip_delta(const std::vector<int>& x, std::size_t v) const {
        double field = diag[v];
        for (const auto& [other, w] : adjacent[v])
            field += w * x[other];
        return x[v] ? -field : field;
    }
};

void require_layout(const QuboProblem& q, const char* who) {
    if (!q.has_layout())
        throw std::invalid_argument(std::string(who) +
                                    ": problem carries no instance layout");
}

}  // namespace

std::size_t QuboProblem::var_index(const Node& n, int timestep) const {
    require_layout(*this, "var_index");
    const Instance& inst = *instance;
    const int seams = inst.seam_count();
    if (timestep < 0 || timestep >= seams)
        throw std::invalid_argument("var_index: timestep out of range");
    if (n.seam < 1 || n.seam > seams)
        throw std::invalid_argument("var_index: node is not a real seam");
    if (!inst.in_range(n))
        throw std::invalid_argument("var_index: node outside the instance");
    const std::uint64_t combos =
        static_cast<std::uint64_t>(inst.dims().combos());
    const std::uint64_t real = inst.node_code(n) - combos;
    return static_cast<std::size_t>(real * seams +
                                    static_cast<std::uint64_t>(timestep));
}

std::pair<Node, int> QuboProblem::var_node(std::size_t index) const {
    require_layout(*this, "var_node");
    const Instance& inst = *instance;
    const std::size_t seams = static_cast<std::size_t>(inst.seam_count());
    if (index >= n_vars)
        throw std::invalid_argument("var_node: index out of range");
    const std::uint64_t combos =
        static_cast<std::uint64_t>(inst.dims().combos());
    Node node = inst.node_from_code(index / seams + combos);
    return {node, static_cast<int>(index % seams)};
}

double default_penalty(const Instance& inst) {
    return 2.0 * inst.seam_count() * inst.max_finite_cost();
}

unsigned long long qubo_variable_count(int n_seams, const DimSizes& dims) {
    if (n_seams < 1) throw std::invalid_argument("qubo: need seams");
    unsigned long long v = static_cast<unsigned long long>(n_seams);
    const unsigned long long limit = ~0ULL;
    for (unsigned long long f :
         {static_cast<unsigned long long>(n_seams),
          static_cast<unsigned long long>(dims.directions),
          static_cast<unsigned long long>(dims.tools),
          static_cast<unsigned long long>(dims.configs),
          static_cast<unsigned long long>(dims.positions)}) {
        if (f == 0) throw std::invalid_argument("qubo: zero dimension");
        if (v > limit / f)
            throw std::overflow_error("qubo: variable count overflows");
        v *= f;
    }
    return v;
}

unsigned long long qubit_count_estimate(int n_seams, int tools, int configs,
                                        int positions) {
    DimSizes dims{2, tools, configs, positions};
    return qubo_variable_count(n_seams, dims);
}

QuboProblem build_qubo(const Instance& inst, double penalty,
                       std::size_t cap) {
    if (!(penalty > 0.0))
        throw std::invalid_argument("qubo: penalty must be positive");
    const int n = inst.seam_count();
    const unsigned long long want = qubo_variable_count(n, inst.dims());
    if (want > cap)
        throw std::length_error(
            "qubo: instance needs " + std::to_string(want) +
            " variables, cap is " + std::to_string(cap));

    const std::size_t n_vars = static_cast<std::size_t>(want);
    const std::size_t combos =
        static_cast<std::size_t>(inst.dims().combos());
    const std::size_t n_nodes = static_cast<std::size_t>(n) * combos;
    const std::size_t seams = static_cast<std::size_t>(n);

    std::unordered_map<std::uint64_t, double> weights;
    weights.reserve(n_vars * 8);
    auto add = [&](std::size_t a, std::size_t b, double w) {
        if (a > b) std::swap(a, b);
        weights[static_cast<std::uint64_t>(a) * n_vars + b] += w;
    };

    // transition costs: node a at step t followed by node b closes the
    // cyclic order; unknown, reversed and same-seam moves carry padding
    std::vector<Node> nodes(n_nodes);
    for (std::size_t r = 0; r < n_nodes; ++r)
        nodes[r] = inst.node_from_code(r + combos);
    for (std::size_t a = 0; a < n_nodes; ++a) {
        for (std::size_t b = 0; b < n_nodes; ++b) {
            const double w = inst.edge_cost(nodes[a], nodes[b]).seconds;
            for (std::size_t t = 0; t < seams; ++t)
                add(a * seams + t, b * seams + (t + 1) % seams, w);
        }
    }

    // one node per timestep, one visit per seam: expanded (sum - 1)^2
    auto add_bracket = [&](const std::vector<std::size_t>& vars) {
        for (std::size_t i = 0; i < vars.size(); ++i) {
            add(vars[i], vars[i], -penalty);
            for (std::size_t j = i + 1; j < vars.size(); ++j)
                add(vars[i], vars[j], 2.0 * penalty);
        }
    };
    std::vector<std::size_t> bracket;
    for (std::size_t t = 0; t < seams; ++t) {
        bracket.clear();
        for (std::size_t a = 0; a < n_nodes; ++a)
            bracket.push_back(a * seams + t);
        add_bracket(bracket);
    }
    for (std::size_t s = 0; s < seams; ++s) {
        bracket.clear();
        for (std::size_t c = 0; c < combos; ++c)
            for (std::size_t t = 0; t < seams; ++t)
                bracket.push_back((s * combos + c) * seams + t);
        add_bracket(bracket);
    }

    QuboProblem q;
    q.n_vars = n_vars;
    q.penalty = penalty;
    q.offset = 2.0 * static_cast<double>(n) * penalty;
    q.instance = std::make_shared<Instance>(inst);
    q.terms.reserve(weights.size());
    for (const auto& [key, w] : weights) {
        if (w == 0.0) continue;
        q.terms.push_back({static_cast<std::uint32_t>(key / n_vars),
                           static_cast<std::uint32_t>(key % n_vars), w});
    }
    std::sort(q.terms.begin(), q.terms.end(),
              [](const QuboTerm& a, const QuboTerm& b) {
                  return a.i != b.i ? a.i < b.i : a.j < b.j;
              });
    return q;
}

double qubo_energy(const QuboProblem& problem, std::span<const int> x) {
    if (x.size() != problem.n_vars)
        throw std::invalid_argument(
            "qubo_energy: assignment length mismatch");
    double e = problem.offset;
    for (const auto& t : problem.terms) {
        if (t.i == t.j)
            e += t.weight * x[t.i];
        else
            e += t.weight * x[t.i] * x[t.j];
    }
    return e;
}

IsingProblem to_ising(const QuboProblem& problem) {
    IsingProblem s;
    s.n_vars = problem.n_vars;
    s.fields.assign(problem.n_vars, 0.0);
    s.offset = problem.offset;
    for (const auto& t : problem.terms) {
        if (t.i == t.j) {
            // w x = w (z + 1) / 2
            s.fields[t.i] += t.weight / 2.0;
            s.offset += t.weight / 2.0;
        } else {
            // w x_i x_j = w (z_i z_j + z_i + z_j + 1) / 4
            s.couplings.push_back({t.i, t.j, t.weight / 4.0});
            s.fields[t.i] += t.weight / 4.0;
            s.fields[t.j] += t.weight / 4.0;
            s.offset += t.weight / 4.0;
        }
    }
    return s;
}

double ising_energy(const IsingProblem& problem, std::span<const int> spins) {
    if (spins.size() != problem.n_vars)
        throw std::invalid_argument("ising_energy: spin length mismatch");
    double e = problem.offset;
    for (const auto& c : problem.couplings)
        e += c.coupling * spins[c.i] * spins[c.j];
    for (std::size_t i = 0; i < problem.fields.size(); ++i)
        e += problem.fields[i] * spins[i];
    return e;
}

SaResult solve_sa(const QuboProblem& problem, const SaParams& params) {
    if (params.sweeps < 0)
        throw std::invalid_argument("qubo sa: sweeps must be non-negative");
    if (problem.n_vars == 0)
        throw std::invalid_argument("qubo sa: empty problem");
    FlipModel model(problem);

    double hot = params.temp_hot;
    if (hot <= 0.0) {
        // largest possible single-flip move sets the hot end
        for (std::size_t v = 0; v < problem.n_vars; ++v) {
            double reach = std::abs(model.diag[v]);
            for (const auto& [other, w] : model.adjacent[v])
                reach += std::abs(w);
            hot = std::max(hot, reach);
        }
        if (hot <= 0.0) hot = 1.0;
    }
    double cold = params.temp_cold;
    if (cold <= 0.0) cold = 1e-3 * hot;
    if (cold > hot)
        throw std::invalid_argument(
            "qubo sa: cold temperature above hot temperature");

    auto rng = make_rng(params.seed);
    std::bernoulli_distribution coin(0.5);
    std::uniform_real_distribution<double> uniform(0.0, 1.0);

    SaResult result;
    std::vector<int> x(problem.n_vars);
    for (auto& b : x) b = coin(rng) ? 1 : 0;
    double energy = qubo_energy(problem, x);
    result.assignment = x;
    result.energy = energy;

    const double ratio =
        params.sweeps > 1
            ? std::pow(cold / hot, 1.0 / static_cast<double>(params.sweeps - 1))
            : 1.0;
    double temp = hot;
    for (int sweep = 0; sweep < params.sweeps; ++sweep) {
        for (std::size_t v = 0; v < problem.n_vars; ++v) {
            const double delta = model.flip_delta(x, v);
            if (delta <= 0.0 || uniform(rng) < std::exp(-delta / temp)) {
                x[v] ^= 1;
                energy += delta;
                ++result.flips_accepted;
                if (energy < result.energy) {
                    result.energy = energy;
                    result.assignment = x;
                }
            }
        }
        temp *= ratio;
    }
    return result;
}

SaResult brute_force(const QuboProblem& problem) {
    if (problem.n_vars == 0 || problem.n_vars > 24)
        throw std::invalid_argument(
            "qubo brute force: variable count must lie in 1..24");
    FlipModel model(problem);

    std::vector<int> x(problem.n_vars, 0);
    double energy = problem.offset;
    SaResult result;
    result.assignment = x;
    result.energy = energy;

    const std::uint64_t total = 1ULL << problem.n_vars;
    for (std::uint64_t k = 1; k < total; ++k) {
        // Gray-code order: exactly one bit flips per step
        const std::size_t bit =
            static_cast<std::size_t>(__builtin_ctzll(k));
        energy += model.flip_delta(x, bit);
        x[bit] ^= 1;
        if (energy < result.energy) {
            result.energy = energy;
            result.assignment = x;
        }
    }
    return result;
}

std::string QuboViolation::describe() const {
    std::ostringstream out;
    switch (kind) {
        case Kind::TimestepEmpty:
            out << "timestep " << index << " selects no node";
            break;
        case Kind::TimestepMultiple:
            out << "timestep " << index << " selects " << count << " nodes";
            break;
        case Kind::SeamMissing:
            out << "seam " << index << " is never visited";
            break;
        case Kind::SeamRepeated:
            out << "seam " << index << " is visited " << count << " times";
            break;
    }
    return out.str();
}

std::string QuboDecodeReport::summary() const {
    if (constraints_ok()) return "all sequencing constraints hold";
    std::ostringstream out;
    out << violations.size() << " violation(s):";
    for (const auto& v : violations) out << " " << v.describe() << ";";
    return out.str();
}

QuboDecodeReport decode_qubo_solution(std::span<const int> x,
                                      const QuboProblem& problem) {
    require_layout(problem, "decode_qubo_solution");
    if (x.size() != problem.n_vars)
        throw std::invalid_argument(
            "decode_qubo_solution: assignment length mismatch");
    const Instance& inst = *problem.instance;
    const int n = inst.seam_count();

    std::vector<int> per_timestep(static_cast<std::size_t>(n), 0);
    std::vector<int> per_seam(static_cast<std::size_t>(n) + 1, 0);
    std::vector<std::optional<Node>> at(static_cast<std::size_t>(n));
    for (std::size_t v = 0; v < x.size(); ++v) {
        if (!x[v]) continue;
        auto [node, t] = problem.var_node(v);
        per_timestep[static_cast<std::size_t>(t)] += 1;
        per_seam[static_cast<std::size_t>(node.seam)] += 1;
        at[static_cast<std::size_t>(t)] = node;
    }

    QuboDecodeReport report;
    for (int t = 0; t < n; ++t) {
        const int c = per_timestep[static_cast<std::size_t>(t)];
        if (c == 0)
            report.violations.push_back(
                {QuboViolation::Kind::TimestepEmpty, t, 0});
        else if (c > 1)
            report.violations.push_back(
                {QuboViolation::Kind::TimestepMultiple, t, c});
    }
    for (int s = 1; s <= n; ++s) {
        const int c = per_seam[static_cast<std::size_t>(s)];
        if (c == 0)
            report.violations.push_back(
                {QuboViolation::Kind::SeamMissing, s, 0});
        else if (c > 1)
            report.violations.push_back(
                {QuboViolation::Kind::SeamRepeated, s, c});
    }
    if (!report.violations.empty()) return report;

    Tour tour;
    tour.nodes.reserve(static_cast<std::size_t>(n));
    for (int t = 0; t < n; ++t)
        tour.nodes.push_back(*at[static_cast<std::size_t>(t)]);
    auto [cost, feasible] = tour_cost(tour.nodes, inst, CostMode::Cyclic);
    tour.total_cost = cost;
    tour.feasible = feasible;
    report.tour = std::move(tour);
    return report;
}

std::vector<int> encode_tour_assignment(const Tour& tour,
                                        const QuboProblem& problem) {
    require_layout(problem, "encode_tour_assignment");
    const Instance& inst = *problem.instance;
    if (tour.nodes.size() != static_cast<std::size_t>(inst.seam_count()))
        throw std::invalid_argument(
            "encode_tour_assignment: tour length does not match the "
            "instance");
    std::vector<int> x(problem.n_vars, 0);
    for (std::size_t j = 0; j < tour.nodes.size(); ++j)
        x[problem.var_index(tour.nodes[j], static_cast<int>(j))] = 1;
    return x;
}

void save_qubo(const QuboProblem& problem, const std::string& path) {
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("qubo: cannot write " + path);
    char buf[64];
    out << problem.n_vars << "\n";
    std::snprintf(buf, sizeof buf, "%.17g", problem.offset);
    out << "# offset " << buf << "\n";
    for (const auto& t : problem.terms) {
        std::snprintf(buf, sizeof buf, "%.17g", t.weight);
        out << t.i << " " << t.j << " " << buf << "\n";
    }
    if (!out)
        throw std::runtime_error("qubo: write failed for " + path);
}

QuboProblem load_qubo(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("qubo: cannot open " + path);
    QuboProblem q;
    bool have_header = false;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::istringstream row(line);
        std::string first;
        if (!(row >> first)) continue;  // blank
        if (first == "#") {
            std::string key;
            if (row >> key && key == "offset") {
                if (!(row >> q.offset))
                    throw std::runtime_error(
                        path + ": line " + std::to_string(line_no) +
                        ": malformed offset comment");
            }
            continue;
        }
        if (first.front() == '#') continue;
        if (!have_header) {
            q.n_vars = std::stoull(first);
            have_header = true;
            continue;
        }
        QuboTerm t;
        t.i = static_cast<std::uint32_t>(std::stoul(first));
        if (!(row >> t.j >> t.weight))
            throw std::runtime_error(path + ": line " +
                                     std::to_string(line_no) +
                                     ": expected `i j weight`");
        if (t.i > t.j || t.j >= q.n_vars)
            throw std::runtime_error(path + ": line " +
                                     std::to_string(line_no) +
                                     ": term indices out of range");
        q.terms.push_back(t);
    }
    if (!have_header)
        throw std::runtime_error(path + ": missing variable-count header");
    std::sort(q.terms.begin(), q.terms.end(),
              [](const QuboTerm& a, const QuboTerm& b) {
                  return a.i != b.i ? a.i < b.i : a.j < b.j;
              });
    return q;
}

}  // namespace rko
