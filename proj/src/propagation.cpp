#include "anchorfair/propagation.hpp"

#include <stdexcept>
#include <string>

namespace anchorfair {

ClusterResult propagate(const AnchorGraph& graph, const AnchorLabeling& labeling) {
  const Eigen::Index m = graph.Z.rows();
  const Eigen::Index n = graph.Z.cols();
  if (labeling.L.rows() != m) {
    throw std::invalid_argument("graph has " + std::to_string(m) +
                                " anchors but labeling has " +
                                std::to_string(labeling.L.rows()));
  }
  if (labeling.L.cols() != labeling.k) {
    throw std::invalid_argument("label matrix width disagrees with k");
  }
  validate_anchor_graph(graph);
  for (Eigen::Index j = 0; j < m; ++j) {
    if (labeling.L.row(j).sum() != 1.0 ||
        labeling.L(j, labeling.labels[j]) != 1.0) {
      throw std::invalid_argument("label matrix row " + std::to_string(j) +
                                  " is not one-hot");
    }
  }

  ClusterResult result;
  result.k = labeling.k;
  result.Y = graph.Z.transpose() * labeling.L;  // n x k
  result.hard_labels.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    int best = 0;
    for (int j = 1; j < labeling.k; ++j) {
      if (result.Y(i, j) > result.Y(i, best)) best = j;
    }
    result.hard_labels[i] = best;
  }
  return result;
}

}  // namespace anchorfair
