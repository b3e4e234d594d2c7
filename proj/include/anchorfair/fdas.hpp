#pragma once

#include <vector>

#include "anchorfair/types.hpp"

namespace anchorfair {

struct QuotaVector {
  std::vector<int> counts;  // anchors per group, sums to m
};

// Proportional quota allocation: counts[g] = floor(m * proportions[g]), then
// the residual m - sum(counts) is handed out one unit at a time to the group
// with the smallest current count (ties broken toward the lowest group id).
// Throws on m <= 0 or a negative proportion; warns on stderr when m < t.
QuotaVector compute_quotas(int m, const std::vector<double>& proportions);

// Fair directly-alternate sampling. Deterministic: shifts features by the
// global minimum, scores each sample by its shifted column sum, and picks
// each group's quota by repeated argmax with the decay s <- s*(1-s)/max(s)
// applied to the unselected samples after every pick. Throws when a group's
// population is smaller than its quota.
AnchorSet select_anchors(const Dataset& dataset, int m);

// Selection with the group structure ignored (single pseudo-group covering
// all samples); anchor_groups still records the true groups.
AnchorSet select_anchors_ungrouped(const Dataset& dataset, int m);

// Seeded uniform sampling without replacement.
AnchorSet select_anchors_random(const Dataset& dataset, int m, unsigned long long seed);

}  // namespace anchorfair
