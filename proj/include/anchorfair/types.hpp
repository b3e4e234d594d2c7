#pragma once

// Shared data model for the anchor-based fair clustering pipeline.
//
// Matrix convention used throughout: feature matrices are d x n with one
// column per sample. Anchor features H are d x m, the anchor graph Z is
// m x n with one simplex column per sample, the anchor label matrix L is
// m x k with one-hot rows, and the propagated soft assignment Y is n x k.

#include <Eigen/Dense>

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace anchorfair {

struct Dataset {
  Eigen::MatrixXd features;                 // d x n
  std::vector<int> groups;                  // length n, dense ids in [0, num_groups)
  std::optional<std::vector<int>> truth;    // length n when present
  int num_groups = 0;
  std::vector<std::string> group_names;     // dense id -> original label

  int n() const { return static_cast<int>(features.cols()); }
  int d() const { return static_cast<int>(features.rows()); }
};

struct GroupStats {
  std::vector<int> sizes;          // |G_r|
  std::vector<double> proportions; // |G_r| / n
};

struct AnchorSet {
  std::vector<int> indices;        // length m, positions into dataset columns, no duplicates
  Eigen::MatrixXd H;               // d x m, copies of the selected columns
  std::vector<int> anchor_groups;  // anchor_groups[j] == groups[indices[j]]
  int num_groups = 0;

  int m() const { return static_cast<int>(indices.size()); }
};

// Column-stochastic sample-to-anchor affinity matrix.
struct AnchorGraph {
  Eigen::MatrixXd Z;               // m x n
};

struct AnchorLabeling {
  std::vector<int> labels;         // length m, dense ids in [0, k)
  Eigen::MatrixXd L;               // m x k, one-hot rows
  std::vector<int> cluster_sizes;  // anchors per cluster
  Eigen::MatrixXi joint_counts;    // k x t, anchors with cluster l and group r
  int k = 0;
  int num_groups = 0;
};

struct MetricsBundle {
  std::optional<double> acc;       // absent when ground truth is missing
  std::optional<double> nmi;
  double balance = 0.0;
  std::optional<double> mnce;      // absent when the global group distribution is degenerate
  std::optional<double> soft_balance;  // absent without an anchor graph
  Eigen::MatrixXd per_cluster_proportions;  // k x t, rows of empty clusters are zero
};

struct ClusterResult {
  std::vector<int> hard_labels;    // length n, values in [0, k)
  Eigen::MatrixXd Y;               // n x k
  int k = 0;
  std::map<std::string, double> metrics;
  std::map<std::string, double> timings;  // seconds
};

// Checks the column-simplex invariant: entries >= -1e-9 and column sums
// within 1e-6 of one. Throws std::runtime_error on violation.
void validate_anchor_graph(const AnchorGraph& graph);

// Clamps tiny negative entries to zero in place (export form of Z).
void clamp_anchor_graph(AnchorGraph& graph);

}  // namespace anchorfair
