#pragma once

#include <Eigen/Core>

#include <vector>

#include "anchorfair/types.hpp"

namespace anchorfair {

// Min-ratio fairness score of a nonnegative k x t mass matrix: for every
// row with positive sum, take min_r mass / max_r mass, and return the
// minimum over rows. All-zero rows are skipped; a single group (t = 1)
// scores a vacuous 1. A zero entry in a populated row scores 0.
double balance_from_masses(const Eigen::MatrixXd& masses);

// Group-proportion fairness of a hard clustering (1 = every cluster mirrors
// perfect parity, 0 = some cluster excludes a group).
double balance(const std::vector<int>& labels, const std::vector<int>& groups,
               int k, int t);

// Worst cluster's group entropy over the global group entropy, in [0, 1].
// Throws when the global distribution is concentrated on one group.
double mnce(const std::vector<int>& labels, const std::vector<int>& groups,
            int k, int t);

// Clustering accuracy under the best one-to-one cluster/class matching
// (assignment problem on the contingency table).
double acc(const std::vector<int>& labels, const std::vector<int>& truth, int k);

// Normalized mutual information, arithmetic-mean normalization, with the
// 0/0 -> 0 convention for degenerate partitions.
double nmi(const std::vector<int>& labels, const std::vector<int>& truth, int k);

// Fairness of the soft assignment: group mass ratios of each anchor
// cluster's total affinity, scored like balance_from_masses. Throws if a
// cluster's rows of Z carry no mass at all.
double soft_balance(const Eigen::MatrixXd& Z, const AnchorLabeling& labeling,
                    const std::vector<int>& groups);

// Row-normalized k x t table of group shares per cluster; rows of empty
// clusters are left zero.
Eigen::MatrixXd per_cluster_proportions(const std::vector<int>& labels,
                                        const std::vector<int>& groups,
                                        int k, int t);

// Assembles the full bundle. acc/nmi need dataset truth; soft_balance needs
// the graph and the anchor labeling; mnce needs at least two populated
// groups. Whatever is unavailable stays unset.
MetricsBundle compute_metrics(const std::vector<int>& labels,
                              const Dataset& dataset, int k,
                              const AnchorGraph* graph = nullptr,
                              const AnchorLabeling* labeling = nullptr);

}  // namespace anchorfair
