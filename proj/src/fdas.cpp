#include "anchorfair/fdas.hpp"

#include <algorithm>
#include <iostream>
#include <limits>
#include <random>
#include <stdexcept>

#include "anchorfair/core.hpp"

namespace anchorfair {

QuotaVector compute_quotas(int m, const std::vector<double>& proportions) {
  if (m <= 0) {
    throw std::invalid_argument("anchor count m must be positive, got " + std::to_string(m));
  }
  const int t = static_cast<int>(proportions.size());
  if (t == 0) throw std::invalid_argument("empty proportion vector");
  for (int g = 0; g < t; ++g) {
    if (proportions[g] < 0.0) {
      throw std::invalid_argument("proportion for group " + std::to_string(g) +
                                  " is negative");
    }
  }
  if (m < t) {
    std::cerr << "[warn] anchor count m=" << m << " is below the group count t=" << t
              << "; some groups will receive no anchor\n";
  }

  QuotaVector quota;
  quota.counts.resize(t);
  int assigned = 0;
  for (int g = 0; g < t; ++g) {
    quota.counts[g] = static_cast<int>(std::floor(m * proportions[g]));
    assigned += quota.counts[g];
  }
  // Hand the residual to the smallest counts, lowest group id first on ties.
  for (int left = m - assigned; left > 0; --left) {
    int best = 0;
    for (int g = 1; g < t; ++g) {
      if (quota.counts[g] < quota.counts[best]) best = g;
    }
    quota.counts[best]++;
  }
  return quota;
}

namespace {

// Picks count anchors from the member list by repeated argmax with score
// decay. members holds sample indices; scores is indexed like members.
void pick_group_anchors(const Eigen::VectorXd& shifted_col_sums,
                        const std::vector<int>& members, int count,
                        std::vector<int>* out) {
  const int size = static_cast<int>(members.size());
  Eigen::VectorXd scores(size);
  for (int i = 0; i < size; ++i) scores[i] = shifted_col_sums[members[i]];

  std::vector<char> masked(size, 0);
  double max_score = scores.maxCoeff();
  if (max_score <= 0.0) {
    scores.setOnes();  // all-zero score vector: uniform fallback
  } else {
    scores /= max_score;
  }

  for (int picked = 0; picked < count; ++picked) {
    // argmax over unmasked entries, lowest index on ties
    int best = -1;
    double best_score = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < size; ++i) {
      if (!masked[i] && scores[i] > best_score) {
        best = i;
        best_score = scores[i];
      }
    }
    out->push_back(members[best]);
    masked[best] = 1;
    if (picked + 1 == count) break;

    // decay the remaining scores and renormalize by the unmasked max
    double decayed_max = 0.0;
    for (int i = 0; i < size; ++i) {
      if (masked[i]) continue;
      scores[i] *= 1.0 - scores[i];
      decayed_max = std::max(decayed_max, scores[i]);
    }
    if (decayed_max <= 0.0) {
      // degenerate (all scores were 0 or 1): uniform fallback, so the next
      // argmax picks the lowest unmasked index
      for (int i = 0; i < size; ++i) {
        if (!masked[i]) scores[i] = 1.0;
      }
    } else {
      for (int i = 0; i < size; ++i) {
        if (!masked[i]) scores[i] /= decayed_max;
      }
    }
  }
}

AnchorSet assemble(const Dataset& dataset, std::vector<int> indices) {
  AnchorSet anchors;
  anchors.H.resize(dataset.d(), static_cast<Eigen::Index>(indices.size()));
  anchors.anchor_groups.reserve(indices.size());
  for (size_t j = 0; j < indices.size(); ++j) {
    anchors.H.col(static_cast<Eigen::Index>(j)) = dataset.features.col(indices[j]);
    anchors.anchor_groups.push_back(dataset.groups[indices[j]]);
  }
  anchors.indices = std::move(indices);
  anchors.num_groups = dataset.num_groups;
  return anchors;
}

AnchorSet select_with_groups(const Dataset& dataset, int m,
                             const std::vector<int>& groups, int t,
                             const std::vector<double>& proportions) {
  if (m < 1) throw std::invalid_argument("anchor count m must be at least 1");
  if (m > dataset.n()) {
    throw std::invalid_argument("anchor count m=" + std::to_string(m) +
                                " exceeds sample count n=" + std::to_string(dataset.n()));
  }
  const QuotaVector quota = compute_quotas(m, proportions);

  std::vector<std::vector<int>> members(t);
  for (int i = 0; i < dataset.n(); ++i) members[groups[i]].push_back(i);
  for (int g = 0; g < t; ++g) {
    if (static_cast<int>(members[g].size()) < quota.counts[g]) {
      throw std::invalid_argument(
          "group " + std::to_string(g) + " has " + std::to_string(members[g].size()) +
          " members but a quota of " + std::to_string(quota.counts[g]) +
          " anchors; lower m");
    }
  }

  // Shift by the global minimum so column sums are nonnegative coverage scores.
  const double global_min = dataset.features.minCoeff();
  Eigen::VectorXd col_sums =
      (dataset.features.array() - global_min).matrix().colwise().sum().transpose();

  std::vector<int> picked;
  picked.reserve(m);
  for (int g = 0; g < t; ++g) {
    pick_group_anchors(col_sums, members[g], quota.counts[g], &picked);
  }
  return assemble(dataset, std::move(picked));
}

}  // namespace

AnchorSet select_anchors(const Dataset& dataset, int m) {
  const GroupStats stats = group_stats(dataset);
  return select_with_groups(dataset, m, dataset.groups, dataset.num_groups,
                            stats.proportions);
}

AnchorSet select_anchors_ungrouped(const Dataset& dataset, int m) {
  std::vector<int> single(dataset.n(), 0);
  return select_with_groups(dataset, m, single, 1, {1.0});
}

AnchorSet select_anchors_random(const Dataset& dataset, int m,
                                unsigned long long seed) {
  if (m < 1 || m > dataset.n()) {
    throw std::invalid_argument("anchor count m=" + std::to_string(m) +
                                " out of range [1, " + std::to_string(dataset.n()) + "]");
  }
  std::mt19937_64 gen(seed);
  std::vector<int> pool(dataset.n());
  for (int i = 0; i < dataset.n(); ++i) pool[i] = i;
  // partial Fisher-Yates
  for (int i = 0; i < m; ++i) {
    const int j = i + static_cast<int>(gen() % static_cast<unsigned long long>(pool.size() - i));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(m);
  return assemble(dataset, std::move(pool));
}

}  // namespace anchorfair
