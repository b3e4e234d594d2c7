#include "anchorfair/core.hpp"

#include <cmath>
#include <stdexcept>
#include <unordered_map>

namespace anchorfair {

namespace {

Dataset build_dataset(const Eigen::MatrixXd& features,
                      const std::vector<std::string>& group_labels,
                      const std::vector<int>* truth) {
  const auto n = features.cols();
  const auto d = features.rows();
  if (n == 0 || d == 0) {
    throw std::invalid_argument("dataset is empty (" + std::to_string(d) + "x" +
                                std::to_string(n) + ")");
  }
  if (static_cast<Eigen::Index>(group_labels.size()) != n) {
    throw std::invalid_argument("group vector length " +
                                std::to_string(group_labels.size()) +
                                " does not match sample count " + std::to_string(n));
  }
  if (truth != nullptr && static_cast<Eigen::Index>(truth->size()) != n) {
    throw std::invalid_argument("truth vector length " + std::to_string(truth->size()) +
                                " does not match sample count " + std::to_string(n));
  }
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < d; ++i) {
      if (!std::isfinite(features(i, j))) {
        throw std::invalid_argument("features(" + std::to_string(i) + "," +
                                    std::to_string(j) + ") is not finite");
      }
    }
  }

  Dataset dataset;
  dataset.features = features;
  dataset.groups.resize(group_labels.size());
  // Dense remap in first-appearance order.
  std::unordered_map<std::string, int> remap;
  for (size_t i = 0; i < group_labels.size(); ++i) {
    auto it = remap.find(group_labels[i]);
    if (it == remap.end()) {
      int id = static_cast<int>(remap.size());
      remap.emplace(group_labels[i], id);
      dataset.group_names.push_back(group_labels[i]);
      dataset.groups[i] = id;
    } else {
      dataset.groups[i] = it->second;
    }
  }
  dataset.num_groups = static_cast<int>(dataset.group_names.size());
  if (truth != nullptr) dataset.truth = *truth;
  return dataset;
}

}  // namespace

Dataset validate_dataset(const Eigen::MatrixXd& features,
                         const std::vector<long long>& groups,
                         const std::vector<int>* truth) {
  std::vector<std::string> labels;
  labels.reserve(groups.size());
  for (long long g : groups) labels.push_back(std::to_string(g));
  return build_dataset(features, labels, truth);
}

Dataset validate_dataset(const Eigen::MatrixXd& features,
                         const std::vector<std::string>& group_labels,
                         const std::vector<int>* truth) {
  return build_dataset(features, group_labels, truth);
}

GroupStats group_stats(const Dataset& dataset) {
  GroupStats stats;
  stats.sizes.assign(dataset.num_groups, 0);
  for (int g : dataset.groups) stats.sizes[g]++;
  stats.proportions.resize(dataset.num_groups);
  const double n = static_cast<double>(dataset.n());
  for (int r = 0; r < dataset.num_groups; ++r) {
    stats.proportions[r] = stats.sizes[r] / n;
  }
  return stats;
}

void validate_anchor_graph(const AnchorGraph& graph) {
  const auto& Z = graph.Z;
  if (Z.minCoeff() < -1e-9) {
    throw std::runtime_error("anchor graph has entry " + std::to_string(Z.minCoeff()) +
                             " below -1e-9");
  }
  for (Eigen::Index i = 0; i < Z.cols(); ++i) {
    const double sum = Z.col(i).sum();
    if (std::abs(sum - 1.0) > 1e-6) {
      throw std::runtime_error("anchor graph column " + std::to_string(i) +
                               " sums to " + std::to_string(sum));
    }
  }
}

void clamp_anchor_graph(AnchorGraph& graph) {
  graph.Z = graph.Z.cwiseMax(0.0);
}

}  // namespace anchorfair
