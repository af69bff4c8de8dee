#ifndef RKO_DECODER_HPP
#define RKO_DECODER_HPP

#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "rko/chromosome.hpp"
#include "rko/instance.hpp"
#include "rko/tour.hpp"

namespace rko {

/// Indices that sort `keys` ascending; equal keys keep their index order.
std::vector<std::size_t> decode_permutation(std::span<const double> keys);

/// Bin one key in (0,1] into {0..cardinality-1}: the result is k-1 for the
/// smallest k with key <= k / cardinality, i.e. bins are open below and
/// closed above.
int decode_categorical_key(double key, int cardinality);
std::vector<int> decode_categorical(std::span<const double> keys,
                                    int cardinality);

/// Layout of a single-robot chromosome: length 5 * n_seams, block 0 holds
/// the seam-order keys, blocks 1..4 hold direction/tool/config/position
/// keys. Feature keys are bound to seam identity (offset i in a feature
/// block belongs to dense seam i), not to visit position.
Tour decode(const Chromosome& chromosome, const Instance& inst,
            CostMode mode = CostMode::HomeAnchored);

/// Sum of edge costs under `mode` plus a feasibility flag (false as soon as
/// one edge is padded). An empty sequence costs zero.
std::pair<double, bool> tour_cost(std::span<const Node> nodes,
                                  const Instance& inst, CostMode mode);

using CollisionHook = std::function<double(const std::vector<Tour>&)>;

/// Multi-robot layout: n_seams seam keys, then `robots` robot keys, then
/// optionally the four feature blocks (total n+v or 5n+v). All n+v order
/// keys are sorted together and the sequence is rotated so the largest
/// robot key comes last; each robot key then terminates the run of seams
/// assigned to that robot. Every robot tour is home-anchored. The optional
/// hook adds a cost term computed from the assembled tours.
MultiRobotPlan decode_multi_robot(const Chromosome& chromosome, int robots,
                                  const Instance& inst,
                                  const CollisionHook& collision = {});

}  // namespace rko

#endif
