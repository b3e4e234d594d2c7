#pragma once

#include <Eigen/Core>

#include <vector>

#include "anchorfair/types.hpp"

namespace anchorfair {

// Per-(cluster, group) mass targets for the constrained graph solve, plus
// the row/column index blocks the targets refer to. targets(l, r) is the
// total Z mass that columns of group r must place on anchors of cluster l.
struct ConstraintTable {
  Eigen::MatrixXd targets;                      // k x t
  std::vector<std::vector<int>> anchor_blocks;  // C_l: anchor rows in cluster l
  std::vector<std::vector<int>> sample_blocks;  // G_r: sample columns in group r
  int k = 0;
  int num_groups = 0;

  long long block_size(int l, int r) const {
    return static_cast<long long>(anchor_blocks[l].size()) *
           static_cast<long long>(sample_blocks[r].size());
  }
};

// Groups positions by assignment value: result[v] lists every i with
// assignments[i] == v, ascending.
std::vector<std::vector<int>> index_blocks(const std::vector<int>& assignments,
                                           int count);

// Scales the anchor-level joint counts to sample counts: cluster l receives
// the fraction joint(l,r)/m_r of group r's n_r samples, so each group's
// targets sum to its sample count and the block constraints stay consistent
// with column-stochastic Z. Throws if a populated group has no anchors.
ConstraintTable build_constraint_table(const AnchorLabeling& labeling,
                                       const Dataset& dataset);

}  // namespace anchorfair
