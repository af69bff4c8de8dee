#ifndef RKO_QUBO_HPP
#define RKO_QUBO_HPP

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rko/instance.hpp"
#include "rko/tour.hpp"

namespace rko {

struct QuboTerm {
    std::uint32_t i = 0;
    std::uint32_t j = 0;  // i <= j; i == j holds the linear coefficient
    double weight = 0.0;
};

/// Binary quadratic model of the cyclic sequencing problem. One variable
/// per (real-seam node, timestep); timesteps run 0..n_seams-1 and wrap.
/// energy(x) = sum_{i<=j} weight * x_i x_j + offset.
///
/// A problem built from an instance keeps the instance (for decoding);
/// one loaded from a bare coefficient file has no decoding context.
struct QuboProblem {
    std::size_t n_vars = 0;
    std::vector<QuboTerm> terms;  // canonical, sorted by (i, j), unique
    double offset = 0.0;
    double penalty = 0.0;

    std::shared_ptr<const Instance> instance;  // null for file-loaded problems

    std::size_t var_index(const Node& n, int timestep) const;
    std::pair<Node, int> var_node(std::size_t index) const;
    bool has_layout() const { return instance != nullptr; }
};

/// Penalty weight that dominates any achievable tour-cost difference:
/// 2 * n_seams * max listed cost.
double default_penalty(const Instance& inst);

/// Total variable count n_seams^2 * directions * tools * configs *
/// positions (home excluded). Throws std::overflow_error if it cannot be
/// represented.
unsigned long long qubo_variable_count(int n_seams, const DimSizes& dims);

/// Hardware-style qubit estimate 2 * n_seams^2 * tools * configs *
/// positions (the direction cardinality enters as the literal factor 2).
unsigned long long qubit_count_estimate(int n_seams, int tools, int configs,
                                        int positions);

/// Assemble cost + one-node-per-timestep + one-visit-per-seam terms.
/// penalty must be > 0 (use default_penalty). Refuses instances whose
/// variable count exceeds `cap`.
QuboProblem build_qubo(const Instance& inst, double penalty,
                       std::size_t cap = 50000);

double qubo_energy(const QuboProblem& problem, std::span<const int> x);

struct IsingTerm {
    std::uint32_t i = 0;
    std::uint32_t j = 0;  // i < j
    double coupling = 0.0;
};

/// Spin model equivalent under z = 2x - 1:
/// energy(z) = sum couplings * z_i z_j + sum fields * z_i + offset.
struct IsingProblem {
    std::size_t n_vars = 0;
    std::vector<IsingTerm> couplings;
    std::vector<double> fields;
    double offset = 0.0;
};

IsingProblem to_ising(const QuboProblem& problem);
double ising_energy(const IsingProblem& problem, std::span<const int> spins);

struct SaParams {
    int sweeps = 2000;
    double temp_hot = 0.0;   // <= 0: auto from the coefficient scale
    double temp_cold = 0.0;  // <= 0: auto
    std::uint64_t seed = 0;
};

struct SaResult {
    std::vector<int> assignment;
    double energy = 0.0;
    std::uint64_t flips_accepted = 0;
};

/// Single-bit-flip Metropolis with a geometric temperature ramp; tracks
/// the best assignment ever visited. sweeps = 0 evaluates the random
/// initial assignment only.
SaResult solve_sa(const QuboProblem& problem, const SaParams& params);

/// Exact minimiser by Gray-code enumeration; requires n_vars <= 24.
SaResult brute_force(const QuboProblem& problem);

struct QuboViolation {
    enum class Kind {
        TimestepEmpty,
        TimestepMultiple,
        SeamMissing,
        SeamRepeated
    };
    Kind kind;
    int index = 0;  // timestep or dense seam index (1-based seam)
    int count = 0;
    std::string describe() const;
};

struct QuboDecodeReport {
    std::optional<Tour> tour;  // cyclic-cost tour when constraints hold
    std::vector<QuboViolation> violations;
    bool constraints_ok() const { return violations.empty(); }
    std::string summary() const;
};

/// Read the one-hot assignment back into a node sequence; requires the
/// problem to carry its instance.
QuboDecodeReport decode_qubo_solution(std::span<const int> x,
                                      const QuboProblem& problem);

/// One-hot encoding of a tour (position j -> timestep j).
std::vector<int> encode_tour_assignment(const Tour& tour,
                                        const QuboProblem& problem);

/// Text form: `n_vars` header, optional `# offset <v>` comment, then
/// `i j weight` lines in canonical order.
void save_qubo(const QuboProblem& problem, const std::string& path);
QuboProblem load_qubo(const std::string& path);

}  // namespace rko

#endif
