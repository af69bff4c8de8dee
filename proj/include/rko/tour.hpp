#ifndef RKO_TOUR_HPP
#define RKO_TOUR_HPP

#include <vector>

#include "rko/node.hpp"

namespace rko {

/// How a node sequence is closed into a tour.
///   HomeAnchored: home -> nodes[0] -> ... -> nodes.back() -> home.
///   Cyclic:       nodes[0] -> ... -> nodes.back() -> nodes[0], no home.
enum class CostMode { HomeAnchored, Cyclic };

/// Ordered node sequence visiting every real seam exactly once.
/// total_cost is always recomputable from nodes; feasible means no edge of
/// the closed tour fell back to the padding cost.
struct Tour {
    std::vector<Node> nodes;
    double total_cost = 0.0;
    bool feasible = true;
};

/// One tour per robot; a robot left idle has an empty tour of cost zero.
struct MultiRobotPlan {
    std::vector<Tour> tours;
    double total_cost = 0.0;
    bool feasible = true;
};

}  // namespace rko

#endif
