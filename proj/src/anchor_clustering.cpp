#include "anchorfair/anchor_clustering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>

namespace anchorfair {

namespace {

double uniform01(std::mt19937_64& gen) {
  return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

// Seeded k-means++: D^2 sampling by cumulative walk so the draw sequence
// depends only on the engine stream.
std::vector<int> kmeanspp_init(const Eigen::MatrixXd& points, int k,
                               std::mt19937_64& gen) {
  const int m = static_cast<int>(points.rows());
  std::vector<int> centers;
  centers.push_back(static_cast<int>(gen() % static_cast<unsigned long long>(m)));

  Eigen::VectorXd dist2 = (points.rowwise() - points.row(centers[0])).rowwise().squaredNorm();
  while (static_cast<int>(centers.size()) < k) {
    const double total = dist2.sum();
    int next = -1;
    if (total > 0.0) {
      double x = uniform01(gen) * total;
      for (int i = 0; i < m; ++i) {
        x -= dist2[i];
        if (x <= 0.0) {
          next = i;
          break;
        }
      }
      if (next < 0) next = m - 1;
    } else {
      // all remaining points coincide with a center: lowest unchosen index
      for (int i = 0; i < m; ++i) {
        if (std::find(centers.begin(), centers.end(), i) == centers.end()) {
          next = i;
          break;
        }
      }
    }
    centers.push_back(next);
    dist2 = dist2.cwiseMin(
        (points.rowwise() - points.row(next)).rowwise().squaredNorm());
  }
  return centers;
}

}  // namespace

std::vector<int> LloydKMeans::cluster(const Eigen::MatrixXd& anchors,
                                      const std::vector<int>& /*anchor_groups*/,
                                      int k) const {
  const int m = static_cast<int>(anchors.rows());
  if (m < k) {
    throw std::invalid_argument("lloyd: m=" + std::to_string(m) +
                                " anchors cannot form k=" + std::to_string(k) +
                                " clusters");
  }
  std::mt19937_64 gen(seed_);
  const std::vector<int> seeds = kmeanspp_init(anchors, k, gen);
  Eigen::MatrixXd centroids(k, anchors.cols());
  for (int c = 0; c < k; ++c) centroids.row(c) = anchors.row(seeds[c]);

  std::vector<int> labels(m, -1);
  for (int iter = 0; iter < max_iters_; ++iter) {
    bool changed = false;
    // assign: switch only on strict improvement so ties keep the current
    // label and the loop terminates on degenerate inputs
    for (int i = 0; i < m; ++i) {
      int best = labels[i];
      double best_d = best >= 0
                          ? (anchors.row(i) - centroids.row(best)).squaredNorm()
                          : std::numeric_limits<double>::infinity();
      for (int c = 0; c < k; ++c) {
        const double d = (anchors.row(i) - centroids.row(c)).squaredNorm();
        if (d < best_d) {
          best_d = d;
          best = c;
        }
      }
      if (best != labels[i]) {
        labels[i] = best;
        changed = true;
      }
    }

    // fix empty clusters: move in the point farthest from its own centroid
    std::vector<int> sizes(k, 0);
    for (int l : labels) sizes[l]++;
    for (int c = 0; c < k; ++c) {
      if (sizes[c] > 0) continue;
      int far = -1;
      double far_d = -1.0;
      for (int i = 0; i < m; ++i) {
        if (sizes[labels[i]] <= 1) continue;
        const double d = (anchors.row(i) - centroids.row(labels[i])).squaredNorm();
        if (d > far_d) {
          far_d = d;
          far = i;
        }
      }
      sizes[labels[far]]--;
      labels[far] = c;
      sizes[c] = 1;
      changed = true;
    }

    for (int c = 0; c < k; ++c) {
      Eigen::RowVectorXd mean = Eigen::RowVectorXd::Zero(anchors.cols());
      int count = 0;
      for (int i = 0; i < m; ++i) {
        if (labels[i] == c) {
          mean += anchors.row(i);
          count++;
        }
      }
      centroids.row(c) = mean / count;
    }
    if (!changed) break;
  }
  return labels;
}

std::vector<int> FairletKCenter::cluster(const Eigen::MatrixXd& anchors,
                                         const std::vector<int>& anchor_groups,
                                         int k) const {
  const int m = static_cast<int>(anchors.rows());
  int t = 0;
  for (int g : anchor_groups) t = std::max(t, g + 1);
  if (t != 2) {
    throw std::invalid_argument(
        "fairlet-kcenter supports exactly 2 protected groups (got " +
        std::to_string(t) + "); use the lloyd plugin instead");
  }

  std::vector<int> group0, group1;
  for (int i = 0; i < m; ++i) (anchor_groups[i] == 0 ? group0 : group1).push_back(i);
  if (group0.empty() || group1.empty()) {
    throw std::invalid_argument("fairlet-kcenter: one group has no anchors");
  }
  const int g = std::gcd(static_cast<int>(group0.size()), static_cast<int>(group1.size()));
  const int p = static_cast<int>(group0.size()) / g;
  const int q = static_cast<int>(group1.size()) / g;
  if (g < k) {
    throw std::invalid_argument("fairlet-kcenter: only " + std::to_string(g) +
                                " fairlets of ratio " + std::to_string(p) + ":" +
                                std::to_string(q) + " fit, fewer than k=" +
                                std::to_string(k));
  }

  // Greedy decomposition: each fairlet seeds on the next unmatched group-0
  // anchor (ascending index) and attaches its nearest unmatched neighbors,
  // p-1 from group 0 and q from group 1.
  std::vector<int> fairlet_of(m, -1);
  std::vector<char> used(m, 0);
  Eigen::MatrixXd centroids(g, anchors.cols());
  auto take_nearest = [&](const std::vector<int>& pool, int seed) {
    int best = -1;
    double best_d = std::numeric_limits<double>::infinity();
    for (int i : pool) {
      if (used[i]) continue;
      const double d = (anchors.row(i) - anchors.row(seed)).squaredNorm();
      if (d < best_d) {
        best_d = d;
        best = i;
      }
    }
    return best;
  };
  size_t cursor = 0;
  for (int f = 0; f < g; ++f) {
    while (used[group0[cursor]]) cursor++;
    const int seed = group0[cursor];
    std::vector<int> members{seed};
    used[seed] = 1;
    for (int i = 1; i < p; ++i) members.push_back(take_nearest(group0, seed));
    for (int i = 0; i < q; ++i) members.push_back(take_nearest(group1, seed));
    Eigen::RowVectorXd mean = Eigen::RowVectorXd::Zero(anchors.cols());
    for (int idx : members) {
      if (idx != seed) used[idx] = 1;
      fairlet_of[idx] = f;
      mean += anchors.row(idx);
    }
    centroids.row(f) = mean / static_cast<double>(members.size());
  }

  // Farthest-first traversal on fairlet centroids, starting at centroid 0.
  std::vector<int> centers{0};
  Eigen::VectorXd dist2 =
      (centroids.rowwise() - centroids.row(0)).rowwise().squaredNorm();
  while (static_cast<int>(centers.size()) < k) {
    int far = 0;
    for (int f = 1; f < g; ++f) {
      if (dist2[f] > dist2[far]) far = f;
    }
    centers.push_back(far);
    dist2 = dist2.cwiseMin(
        (centroids.rowwise() - centroids.row(far)).rowwise().squaredNorm());
  }

  std::vector<int> fairlet_label(g);
  for (int f = 0; f < g; ++f) {
    int best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (int c = 0; c < k; ++c) {
      const double d = (centroids.row(f) - centroids.row(centers[c])).squaredNorm();
      if (d < best_d) {
        best_d = d;
        best = c;
      }
    }
    fairlet_label[f] = best;
  }

  std::vector<int> labels(m);
  for (int i = 0; i < m; ++i) labels[i] = fairlet_label[fairlet_of[i]];
  return labels;
}

std::unique_ptr<FairClusteringOperator> make_operator(const std::string& name,
                                                      unsigned long long seed) {
  if (name == "lloyd") return std::make_unique<LloydKMeans>(seed);
  if (name == "fairlet-kcenter") return std::make_unique<FairletKCenter>();
  throw std::invalid_argument("unknown anchor clustering operator '" + name +
                              "' (available: lloyd, fairlet-kcenter)");
}

AnchorLabeling run_operator(const FairClusteringOperator& op,
                            const AnchorSet& anchors, int k) {
  const int m = anchors.m();
  if (m < k) {
    throw std::invalid_argument("need m >= k, got m=" + std::to_string(m) +
                                ", k=" + std::to_string(k));
  }
  Eigen::MatrixXd rows = anchors.H.transpose();  // operators take m x d
  std::vector<int> raw = op.cluster(rows, anchors.anchor_groups, k);
  if (static_cast<int>(raw.size()) != m) {
    throw std::runtime_error("operator '" + op.name() + "' returned " +
                             std::to_string(raw.size()) + " labels for " +
                             std::to_string(m) + " anchors");
  }
  std::vector<char> seen(k, 0);
  for (int l : raw) {
    if (l < 0 || l >= k) {
      throw std::runtime_error("operator '" + op.name() + "' returned label " +
                               std::to_string(l) + " outside [0, " +
                               std::to_string(k) + ")");
    }
    seen[l] = 1;
  }
  for (int l = 0; l < k; ++l) {
    if (!seen[l]) {
      throw std::runtime_error("operator '" + op.name() + "' left cluster " +
                               std::to_string(l) + " empty");
    }
  }

  // dense relabel in first-appearance order
  std::vector<int> remap(k, -1);
  int next = 0;
  AnchorLabeling labeling;
  labeling.labels.resize(m);
  for (int i = 0; i < m; ++i) {
    if (remap[raw[i]] < 0) remap[raw[i]] = next++;
    labeling.labels[i] = remap[raw[i]];
  }

  labeling.k = k;
  labeling.num_groups = anchors.num_groups;
  labeling.L = Eigen::MatrixXd::Zero(m, k);
  labeling.cluster_sizes.assign(k, 0);
  labeling.joint_counts = Eigen::MatrixXi::Zero(k, anchors.num_groups);
  for (int i = 0; i < m; ++i) {
    labeling.L(i, labeling.labels[i]) = 1.0;
    labeling.cluster_sizes[labeling.labels[i]]++;
    labeling.joint_counts(labeling.labels[i], anchors.anchor_groups[i])++;
  }
  return labeling;
}

}  // namespace anchorfair
