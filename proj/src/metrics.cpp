#include "anchorfair/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>
#include <stdexcept>
#include <string>

namespace anchorfair {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_assignments(const std::vector<int>& values, int bound, const char* what) {
  for (size_t i = 0; i < values.size(); ++i) {
    if (values[i] < 0 || values[i] >= bound) {
      throw std::invalid_argument(std::string(what) + "[" + std::to_string(i) +
                                  "] = " + std::to_string(values[i]) +
                                  " outside [0, " + std::to_string(bound) + ")");
    }
  }
}

Eigen::MatrixXd count_table(const std::vector<int>& rows,
                            const std::vector<int>& cols, int nr, int nc) {
  if (rows.size() != cols.size()) {
    throw std::invalid_argument("assignment vectors differ in length");
  }
  check_assignments(rows, nr, "labels");
  check_assignments(cols, nc, "groups");
  Eigen::MatrixXd counts = Eigen::MatrixXd::Zero(nr, nc);
  for (size_t i = 0; i < rows.size(); ++i) counts(rows[i], cols[i]) += 1.0;
  return counts;
}

double entropy(const Eigen::VectorXd& masses) {
  const double total = masses.sum();
  if (total <= 0.0) return 0.0;
  double h = 0.0;
  for (Eigen::Index i = 0; i < masses.size(); ++i) {
    const double p = masses[i] / total;
    if (p > 0.0) h -= p * std::log(p);
  }
  return h;
}

// Hungarian algorithm (potentials + shortest augmenting paths) on a square
// cost matrix; returns row_of_col, minimizing total cost.
std::vector<int> min_cost_assignment(const Eigen::MatrixXd& cost) {
  const int s = static_cast<int>(cost.rows());
  std::vector<double> u(s + 1, 0.0), v(s + 1, 0.0), minv(s + 1);
  std::vector<int> p(s + 1, 0), way(s + 1, 0);
  for (int i = 1; i <= s; ++i) {
    p[0] = i;
    int j0 = 0;
    std::fill(minv.begin(), minv.end(), kInf);
    std::vector<char> used(s + 1, 0);
    do {
      used[j0] = 1;
      const int i0 = p[j0];
      int j1 = 0;
      double delta = kInf;
      for (int j = 1; j <= s; ++j) {
        if (used[j]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= s; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<int> row_of_col(s);
  for (int j = 1; j <= s; ++j) row_of_col[j - 1] = p[j] - 1;
  return row_of_col;
}

}  // namespace

double balance_from_masses(const Eigen::MatrixXd& masses) {
  if (masses.size() == 0) throw std::invalid_argument("empty mass table");
  if (masses.minCoeff() < 0.0) throw std::invalid_argument("negative mass");
  if (masses.cols() == 1) return 1.0;
  double worst = 1.0;
  for (Eigen::Index l = 0; l < masses.rows(); ++l) {
    const double hi = masses.row(l).maxCoeff();
    if (hi <= 0.0) continue;  // empty cluster carries no evidence
    worst = std::min(worst, masses.row(l).minCoeff() / hi);
  }
  return worst;
}

double balance(const std::vector<int>& labels, const std::vector<int>& groups,
               int k, int t) {
  return balance_from_masses(count_table(labels, groups, k, t));
}

double mnce(const std::vector<int>& labels, const std::vector<int>& groups,
            int k, int t) {
  const Eigen::MatrixXd counts = count_table(labels, groups, k, t);
  const double global = entropy(counts.colwise().sum().transpose());
  if (global <= 0.0) {
    throw std::runtime_error(
        "all samples share one group; conditional entropy ratio is undefined");
  }
  double worst = kInf;
  for (int l = 0; l < k; ++l) {
    if (counts.row(l).sum() <= 0.0) continue;
    worst = std::min(worst, entropy(counts.row(l).transpose()));
  }
  return std::clamp(worst / global, 0.0, 1.0);
}

double acc(const std::vector<int>& labels, const std::vector<int>& truth, int k) {
  if (labels.size() != truth.size() || labels.empty()) {
    throw std::invalid_argument("labels and truth must be equal-length and non-empty");
  }
  int kt = 0;
  for (int c : truth) kt = std::max(kt, c + 1);
  const int s = std::max(k, kt);
  const Eigen::MatrixXd counts = count_table(labels, truth, s, s);
  const Eigen::MatrixXd cost = counts.maxCoeff() - counts.array();
  const std::vector<int> row_of_col = min_cost_assignment(cost);
  double matched = 0.0;
  for (int j = 0; j < s; ++j) matched += counts(row_of_col[j], j);
  return matched / static_cast<double>(labels.size());
}

double nmi(const std::vector<int>& labels, const std::vector<int>& truth, int k) {
  if (labels.size() != truth.size() || labels.empty()) {
    throw std::invalid_argument("labels and truth must be equal-length and non-empty");
  }
  int kt = 0;
  for (int c : truth) kt = std::max(kt, c + 1);
  const Eigen::MatrixXd counts = count_table(labels, truth, k, kt);
  const double n = static_cast<double>(labels.size());
  const Eigen::VectorXd row_sums = counts.rowwise().sum();
  const Eigen::VectorXd col_sums = counts.colwise().sum().transpose();
  double mi = 0.0;
  for (int l = 0; l < k; ++l) {
    for (int c = 0; c < kt; ++c) {
      if (counts(l, c) <= 0.0) continue;
      const double p = counts(l, c) / n;
      mi += p * std::log(p * n * n / (row_sums[l] * col_sums[c]));
    }
  }
  const double denom = 0.5 * (entropy(row_sums) + entropy(col_sums));
  if (denom <= 0.0) return 0.0;
  return std::clamp(mi / denom, 0.0, 1.0);
}

double soft_balance(const Eigen::MatrixXd& Z, const AnchorLabeling& labeling,
                    const std::vector<int>& groups) {
  if (static_cast<Eigen::Index>(labeling.labels.size()) != Z.rows()) {
    throw std::invalid_argument("labeling covers " +
                                std::to_string(labeling.labels.size()) +
                                " anchors but Z has " + std::to_string(Z.rows()) +
                                " rows");
  }
  if (static_cast<Eigen::Index>(groups.size()) != Z.cols()) {
    throw std::invalid_argument("group vector length disagrees with Z columns");
  }
  check_assignments(groups, labeling.num_groups, "groups");

  Eigen::MatrixXd masses = Eigen::MatrixXd::Zero(labeling.k, labeling.num_groups);
  for (Eigen::Index i = 0; i < Z.cols(); ++i) {
    const int r = groups[i];
    for (Eigen::Index j = 0; j < Z.rows(); ++j) {
      masses(labeling.labels[j], r) += Z(j, i);
    }
  }
  for (int l = 0; l < labeling.k; ++l) {
    if (masses.row(l).sum() <= 0.0) {
      throw std::runtime_error("anchor cluster " + std::to_string(l) +
                               " received zero soft mass");
    }
  }
  return balance_from_masses(masses);
}

Eigen::MatrixXd per_cluster_proportions(const std::vector<int>& labels,
                                        const std::vector<int>& groups,
                                        int k, int t) {
  Eigen::MatrixXd counts = count_table(labels, groups, k, t);
  for (int l = 0; l < k; ++l) {
    const double total = counts.row(l).sum();
    if (total > 0.0) counts.row(l) /= total;
  }
  return counts;
}

MetricsBundle compute_metrics(const std::vector<int>& labels,
                              const Dataset& dataset, int k,
                              const AnchorGraph* graph,
                              const AnchorLabeling* labeling) {
  if (static_cast<int>(labels.size()) != dataset.n()) {
    throw std::invalid_argument("label count disagrees with dataset size");
  }
  const int t = dataset.num_groups;

  MetricsBundle bundle;
  bundle.per_cluster_proportions =
      per_cluster_proportions(labels, dataset.groups, k, t);
  for (int l = 0; l < k; ++l) {
    if (bundle.per_cluster_proportions.row(l).sum() <= 0.0) {
      std::cerr << "warning: predicted cluster " << l
                << " is empty; fairness scores skip it\n";
    }
  }
  bundle.balance = balance(labels, dataset.groups, k, t);

  Eigen::VectorXd group_counts = Eigen::VectorXd::Zero(t);
  for (int g : dataset.groups) group_counts[g] += 1.0;
  if ((group_counts.array() > 0.0).count() >= 2) {
    bundle.mnce = mnce(labels, dataset.groups, k, t);
  }
  if (dataset.truth) {
    bundle.acc = acc(labels, *dataset.truth, k);
    bundle.nmi = nmi(labels, *dataset.truth, k);
  }
  if (graph != nullptr && labeling != nullptr) {
    bundle.soft_balance = soft_balance(graph->Z, *labeling, dataset.groups);
  }
  return bundle;
}

}  // namespace anchorfair
