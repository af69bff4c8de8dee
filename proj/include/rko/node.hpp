#ifndef RKO_NODE_HPP
#define RKO_NODE_HPP

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <string>

namespace rko {

/// One processing configuration of a seam: which seam is worked, in which
/// direction, with which tool, robot arm configuration, and workpiece
/// position. Seam index 0 is reserved for the robot home pose; the home
/// node is exactly (0,0,0,0,0). Real seams use dense indices 1..n_seams.
struct Node {
    int seam = 0;
    int direction = 0;
    int tool = 0;
    int config = 0;
    int position = 0;

    auto operator<=>(const Node&) const = default;
};

inline constexpr Node home_node() { return Node{0, 0, 0, 0, 0}; }

/// Cardinalities of the four per-seam feature dimensions.
struct DimSizes {
    int directions = 1;
    int tools = 1;
    int configs = 1;
    int positions = 1;

    auto operator<=>(const DimSizes&) const = default;

    /// Number of feature combinations per seam.
    long long combos() const {
        return 1LL * directions * tools * configs * positions;
    }
};

std::string to_string(const Node& n);
std::ostream& operator<<(std::ostream& os, const Node& n);

}  // namespace rko

#endif
