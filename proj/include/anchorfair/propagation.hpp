#pragma once

#include "anchorfair/types.hpp"

namespace anchorfair {

// One-step label diffusion Y = Z'L followed by per-row argmax (lowest
// cluster index on ties). Pure function of its inputs; Y rows inherit the
// unit sum from Z's simplex columns.
ClusterResult propagate(const AnchorGraph& graph, const AnchorLabeling& labeling);

}  // namespace anchorfair
