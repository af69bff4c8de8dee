#ifndef RKO_INSTANCE_HPP
#define RKO_INSTANCE_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "rko/node.hpp"

namespace rko {

struct CostRow {
    Node from;
    Node to;
    double cost = 0.0;
};

struct EdgeCost {
    double seconds = 0.0;
    bool padded = false;
};

/// Directed transition-cost table over composite nodes.
///
/// Costs are stored sparsely; any in-range pair that is absent from the
/// table (infeasible transition, or a same-seam pair, which real data never
/// lists) is charged the padding cost. The padding cost dominates every
/// complete tour built from listed edges: n_seams * max listed cost * 10.
///
/// Seam labels from input files are re-indexed densely: label 0 is the home
/// pose, the remaining labels map (in ascending order) to internal seams
/// 1..n_seams. seam_labels()[k] is the original label of internal seam k+1.
class Instance {
  public:
    Instance(int n_seams, DimSizes dims, std::vector<CostRow> rows,
             std::vector<long long> seam_labels);

    int seam_count() const { return n_seams_; }
    const DimSizes& dims() const { return dims_; }
    double padding_cost() const { return padding_cost_; }
    double max_finite_cost() const { return max_cost_; }
    const std::vector<long long>& seam_labels() const { return seam_labels_; }
    std::size_t row_count() const { return keys_.size(); }

    bool in_range(const Node& n) const;

    /// Stored cost, or the padding cost when the pair is unlisted.
    /// Throws std::out_of_range if either node has out-of-range coordinates.
    double cost(const Node& from, const Node& to) const;
    EdgeCost edge_cost(const Node& from, const Node& to) const;
    bool has_edge(const Node& from, const Node& to) const;

    /// Linear code of a node; codes order nodes lexicographically by
    /// (seam, direction, tool, config, position).
    std::uint64_t node_code(const Node& n) const;
    Node node_from_code(std::uint64_t code) const;
    std::uint64_t node_count() const { return node_count_; }

    /// Visit rows in canonical (from, to) lexicographic order.
    void for_each_row(const std::function<void(const CostRow&)>& fn) const;
    std::vector<CostRow> rows() const;

  private:
    int n_seams_ = 0;
    DimSizes dims_;
    std::vector<long long> seam_labels_;
    std::uint64_t node_count_ = 0;
    double max_cost_ = 0.0;
    double padding_cost_ = 0.0;
    // Sorted parallel arrays; key = from_code * node_count + to_code.
    std::vector<std::uint64_t> keys_;
    std::vector<double> costs_;
};

/// Input schema for the 11-column cost file. Fields are
/// s_from,d_from,t_from,c_from,p_from,s_to,d_to,t_to,c_to,p_to,cost
/// separated by commas or whitespace.
struct LoadSchema {
    enum class Delimiter { Auto, Comma, Whitespace };
    Delimiter delimiter = Delimiter::Auto;
    bool expect_header = true;
};

/// Parse a cost file. Feature cardinalities are inferred from the data
/// (max value + 1 per column). Errors carry the 1-based line number.
Instance load_instance(const std::string& path, const LoadSchema& schema = {});

/// Canonical text form: header plus rows sorted lexicographically by the
/// ten node coordinates, original seam labels preserved. Deterministic
/// byte-for-byte for equal instances.
void save_instance(const Instance& inst, const std::string& path);
std::string instance_to_text(const Instance& inst);

/// Restrict to a uniformly chosen subset of `keep` seams (home retained),
/// re-densify seam indices, recompute the padding cost. Deterministic in
/// (inst, keep, seed).
Instance downsample(const Instance& inst, int keep, std::uint64_t seed);

struct GeneratorParams {
    int n_seams = 10;
    DimSizes dims{2, 2, 2, 2};
    double feasibility_rate = 1.0;  // fraction of node pairs kept
    double cost_scale = 1.0;        // seconds per unit workcell length
    std::uint64_t seed = 0;
    int max_retries = 8;
};

/// Random workcell: each seam gets two 3-D endpoints; a transition cost is
/// the process time of the departed seam (perturbed per tool/config/
/// position) plus the travel time between endpoints. Pairs are dropped with
/// probability 1 - feasibility_rate, except the edges of a random witness
/// tour (home-anchored and its cyclic closure), which are always kept.
Instance generate_synthetic(const GeneratorParams& params);

}  // namespace rko

#endif
