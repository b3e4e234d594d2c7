#include "anchorfair/constraint_table.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace anchorfair {

std::vector<std::vector<int>> index_blocks(const std::vector<int>& assignments,
                                           int count) {
  std::vector<std::vector<int>> blocks(count);
  for (size_t i = 0; i < assignments.size(); ++i) {
    const int v = assignments[i];
    if (v < 0 || v >= count) {
      throw std::invalid_argument("assignment " + std::to_string(v) +
                                  " at position " + std::to_string(i) +
                                  " outside [0, " + std::to_string(count) + ")");
    }
    blocks[v].push_back(static_cast<int>(i));
  }
  return blocks;
}

ConstraintTable build_constraint_table(const AnchorLabeling& labeling,
                                       const Dataset& dataset) {
  const int k = labeling.k;
  const int t = labeling.num_groups;
  if (dataset.num_groups != t) {
    throw std::invalid_argument("anchor labeling covers " + std::to_string(t) +
                                " groups but dataset has " +
                                std::to_string(dataset.num_groups));
  }

  ConstraintTable table;
  table.k = k;
  table.num_groups = t;
  table.anchor_blocks = index_blocks(labeling.labels, k);
  table.sample_blocks = index_blocks(dataset.groups, t);
  table.targets.resize(k, t);
  for (int r = 0; r < t; ++r) {
    const long long m_r = labeling.joint_counts.col(r).sum();
    const long long n_r = static_cast<long long>(table.sample_blocks[r].size());
    if (m_r == 0 && n_r > 0) {
      throw std::runtime_error("group " + std::to_string(r) + " has " +
                               std::to_string(n_r) +
                               " samples but no anchors; block constraints are infeasible");
    }
    for (int l = 0; l < k; ++l) {
      table.targets(l, r) =
          m_r == 0 ? 0.0
                   : static_cast<double>(labeling.joint_counts(l, r)) /
                         static_cast<double>(m_r) * static_cast<double>(n_r);
    }
  }

  double total = 0.0;
  for (int r = 0; r < t; ++r) {
    const double col = table.targets.col(r).sum();
    const double n_r = static_cast<double>(table.sample_blocks[r].size());
    if (std::abs(col - n_r) > 1e-9 * std::max(1.0, n_r)) {
      throw std::runtime_error("targets for group " + std::to_string(r) +
                               " sum to " + std::to_string(col) + ", expected " +
                               std::to_string(n_r));
    }
    total += col;
  }
  if (std::abs(total - dataset.n()) > 1e-9 * std::max(1.0, double(dataset.n()))) {
    throw std::runtime_error("targets sum to " + std::to_string(total) +
                             " but n=" + std::to_string(dataset.n()));
  }
  return table;
}

}  // namespace anchorfair
