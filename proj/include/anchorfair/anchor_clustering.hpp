#pragma once

#include <memory>
#include <string>
#include <vector>

#include "anchorfair/types.hpp"

namespace anchorfair {

// Contract for pluggable anchor-level clustering. `anchors` is m x d with
// one row per anchor. Implementations must label every anchor with a value
// in [0, k) and must not leave any of the k clusters empty. Third-party
// operators can be added by implementing this interface and registering the
// name in make_operator.
class FairClusteringOperator {
 public:
  virtual ~FairClusteringOperator() = default;
  virtual std::string name() const = 0;
  virtual std::vector<int> cluster(const Eigen::MatrixXd& anchors,
                                   const std::vector<int>& anchor_groups,
                                   int k) const = 0;
};

// Lloyd k-means with seeded k-means++ initialization. Ignores the group
// labels; serves as the fairness-agnostic baseline. An empty cluster during
// iteration is re-seeded at the point farthest from its assigned centroid.
class LloydKMeans : public FairClusteringOperator {
 public:
  explicit LloydKMeans(unsigned long long seed, int max_iters = 100)
      : seed_(seed), max_iters_(max_iters) {}
  std::string name() const override { return "lloyd"; }
  std::vector<int> cluster(const Eigen::MatrixXd& anchors,
                           const std::vector<int>& anchor_groups,
                           int k) const override;

 private:
  unsigned long long seed_;
  int max_iters_;
};

// Two-group fairlet decomposition followed by greedy k-center on the fairlet
// centroids. Every fairlet carries the reduced group ratio p:q of the anchor
// set, so each cluster inherits that ratio exactly. Only supports exactly
// two protected groups.
class FairletKCenter : public FairClusteringOperator {
 public:
  std::string name() const override { return "fairlet-kcenter"; }
  std::vector<int> cluster(const Eigen::MatrixXd& anchors,
                           const std::vector<int>& anchor_groups,
                           int k) const override;
};

// Operator lookup by CLI name ("lloyd", "fairlet-kcenter").
std::unique_ptr<FairClusteringOperator> make_operator(const std::string& name,
                                                      unsigned long long seed);

// Runs the operator on the anchor set, validates the returned labels against
// the contract (in-range, no empty cluster), relabels clusters to dense
// [0, k) ids in first-appearance order, and assembles the one-hot matrix L
// plus the cluster/group count tables.
AnchorLabeling run_operator(const FairClusteringOperator& op,
                            const AnchorSet& anchors, int k);

}  // namespace anchorfair
