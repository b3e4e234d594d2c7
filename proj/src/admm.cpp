#include "anchorfair/admm.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

#include "anchorfair/parallel.hpp"

namespace anchorfair {

namespace {

void check_config(const SolverConfig& config) {
  if (config.alpha < 0.0) throw std::invalid_argument("alpha must be >= 0");
  if (config.rho0 <= 0.0) throw std::invalid_argument("rho0 must be > 0");
  if (config.eps <= 0.0) throw std::invalid_argument("eps must be > 0");
  if (config.max_outer <= 0 || config.max_inner <= 0) {
    throw std::invalid_argument("iteration budgets must be positive");
  }
  if (config.beta <= 1.0 || config.tau <= 1.0) {
    throw std::invalid_argument("need beta > 1 and tau > 1");
  }
}

void check_simplex_columns(const Eigen::MatrixXd& Z, const char* where) {
  if (Z.minCoeff() < -1e-9) {
    throw std::runtime_error(std::string(where) + ": negative column entry");
  }
  const double worst =
      (Z.colwise().sum().array() - 1.0).abs().maxCoeff();
  if (worst > 1e-6) {
    throw std::runtime_error(std::string(where) +
                             ": column sum off by " + std::to_string(worst));
  }
}

}  // namespace

double graph_objective(const Eigen::MatrixXd& X, const Eigen::MatrixXd& H,
                       const Eigen::MatrixXd& Z, double alpha) {
  return (X - H * Z).squaredNorm() + alpha * Z.squaredNorm();
}

void update_z(AdmmState& state, const Eigen::MatrixXd& gram,
              const Eigen::MatrixXd& neg2_HtX, const SolverConfig& config) {
  const Eigen::Index m = gram.rows();
  const Eigen::Index n = state.Z.cols();
  Eigen::MatrixXd Q = 2.0 * gram;
  Q.diagonal().array() += 2.0 * (config.alpha + state.rho / 2.0);

  FrankWolfeConfig fw;
  fw.max_iters = config.max_inner;
  fw.tol = config.fw_tol;
  fw.curvature_tol = config.curvature_tol;

  const double rho = state.rho;
  parallel_for(
      n,
      [&](long long begin, long long end) {
        Eigen::VectorXd c(m);
        for (long long i = begin; i < end; ++i) {
          c = neg2_HtX.col(i) - rho * state.E.col(i) + state.Lambda.col(i);
          state.Z.col(i) =
              minimize_quadratic_on_simplex(Q, c, state.Z.col(i), fw).z;
        }
      },
      config.threads);
  check_simplex_columns(state.Z, "update_z");
}

Eigen::MatrixXd project_block_sums(const Eigen::MatrixXd& R,
                                   const ConstraintTable& table) {
  const Eigen::Index m = R.rows();
  const Eigen::Index n = R.cols();
  if (table.targets.rows() != table.k || table.targets.cols() != table.num_groups ||
      static_cast<int>(table.anchor_blocks.size()) != table.k ||
      static_cast<int>(table.sample_blocks.size()) != table.num_groups) {
    throw std::invalid_argument("constraint table is internally inconsistent");
  }

  std::vector<int> cluster_of_row(m, -1);
  for (int l = 0; l < table.k; ++l) {
    for (int j : table.anchor_blocks[l]) {
      if (j < 0 || j >= m || cluster_of_row[j] != -1) {
        throw std::invalid_argument("anchor blocks do not partition the rows");
      }
      cluster_of_row[j] = l;
    }
  }
  std::vector<int> group_of_col(n, -1);
  for (int r = 0; r < table.num_groups; ++r) {
    for (int i : table.sample_blocks[r]) {
      if (i < 0 || i >= n || group_of_col[i] != -1) {
        throw std::invalid_argument("sample blocks do not partition the columns");
      }
      group_of_col[i] = r;
    }
  }
  for (int j = 0; j < m; ++j) {
    if (cluster_of_row[j] < 0) {
      throw std::invalid_argument("row " + std::to_string(j) + " not in any anchor block");
    }
  }
  for (int i = 0; i < n; ++i) {
    if (group_of_col[i] < 0) {
      throw std::invalid_argument("column " + std::to_string(i) + " not in any sample block");
    }
  }

  Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(table.k, table.num_groups);
  for (Eigen::Index i = 0; i < n; ++i) {
    const int r = group_of_col[i];
    for (Eigen::Index j = 0; j < m; ++j) sums(cluster_of_row[j], r) += R(j, i);
  }

  // uniform per-block shift: the Euclidean projection onto a sum constraint
  Eigen::MatrixXd shift(table.k, table.num_groups);
  for (int l = 0; l < table.k; ++l) {
    for (int r = 0; r < table.num_groups; ++r) {
      const long long cells = table.block_size(l, r);
      if (cells == 0) {
        if (table.targets(l, r) > 0.0) {
          throw std::runtime_error("block (" + std::to_string(l) + ", " +
                                   std::to_string(r) + ") has target " +
                                   std::to_string(table.targets(l, r)) +
                                   " but no cells");
        }
        shift(l, r) = 0.0;
      } else {
        shift(l, r) = (table.targets(l, r) - sums(l, r)) / static_cast<double>(cells);
      }
    }
  }

  Eigen::MatrixXd E = R;
  for (Eigen::Index i = 0; i < n; ++i) {
    const int r = group_of_col[i];
    for (Eigen::Index j = 0; j < m; ++j) E(j, i) += shift(cluster_of_row[j], r);
  }
  return E;
}

void update_e(AdmmState& state, const ConstraintTable& table) {
  state.E = project_block_sums(state.Z + state.Lambda / state.rho, table);
}

void update_rho(AdmmState& state, double beta, double tau) {
  if (beta <= 1.0 || tau <= 1.0) {
    throw std::invalid_argument("need beta > 1 and tau > 1");
  }
  // Lambda is the unscaled dual estimate, so it stays put when rho moves.
  if (state.primal_residual > tau * state.dual_residual) {
    state.rho *= beta;
  } else if (state.dual_residual > tau * state.primal_residual) {
    state.rho /= beta;
  }
}

AdmmSolveResult solve_fair_graph(const Dataset& dataset,
                                 const AnchorSet& anchors,
                                 const AnchorLabeling& labeling,
                                 const SolverConfig& config) {
  check_config(config);
  const int m = anchors.m();
  const int n = dataset.n();
  if (m == 0 || n == 0) throw std::invalid_argument("empty problem");
  if (anchors.H.rows() != dataset.features.rows()) {
    throw std::invalid_argument("anchor features and data have different dimensions");
  }
  if (static_cast<int>(labeling.labels.size()) != m) {
    throw std::invalid_argument("labeling covers " +
                                std::to_string(labeling.labels.size()) +
                                " anchors, expected " + std::to_string(m));
  }
  const ConstraintTable table = build_constraint_table(labeling, dataset);

  const Eigen::MatrixXd& X = dataset.features;
  const Eigen::MatrixXd& H = anchors.H;
  const Eigen::MatrixXd gram = H.transpose() * H;
  const Eigen::MatrixXd neg2_HtX = -2.0 * (H.transpose() * X);

  AdmmState state;
  state.Z = Eigen::MatrixXd::Constant(m, n, 1.0 / m);
  state.E = state.Z;
  state.Lambda = Eigen::MatrixXd::Zero(m, n);
  state.rho = config.rho0;
  state.trace.push_back(
      {0, graph_objective(X, H, state.Z, config.alpha), 0.0, 0.0, state.rho});

  int k = 0;
  while (true) {
    update_z(state, gram, neg2_HtX, config);
    Eigen::MatrixXd E_prev = std::move(state.E);
    update_e(state, table);
    state.Lambda += state.rho * (state.Z - state.E);
    if (k % 10 == 0) update_rho(state, config.beta, config.tau);
    state.primal_residual = (state.Z - state.E).norm();
    state.dual_residual = state.rho * (state.E - E_prev).norm();
    k += 1;
    state.iteration = k;

    if (!state.Z.allFinite() || !state.E.allFinite() || !state.Lambda.allFinite()) {
      throw std::runtime_error(
          "non-finite iterate at iteration " + std::to_string(k) +
          "; anchors may be ill-conditioned or rho0 unsuitable");
    }
    state.trace.push_back({k, graph_objective(X, H, state.Z, config.alpha),
                           state.primal_residual, state.dual_residual,
                           state.rho});
    if (k > config.max_outer ||
        std::max(state.primal_residual, state.dual_residual) < config.eps) {
      break;
    }
  }

  AdmmSolveResult result;
  result.converged =
      std::max(state.primal_residual, state.dual_residual) < config.eps;
  result.graph.Z = state.Z;
  result.state = std::move(state);
  validate_anchor_graph(result.graph);
  return result;
}

AnchorGraph solve_unconstrained_graph(const Dataset& dataset,
                                      const AnchorSet& anchors,
                                      const SolverConfig& config) {
  check_config(config);
  const int m = anchors.m();
  const int n = dataset.n();
  if (m == 0 || n == 0) throw std::invalid_argument("empty problem");
  if (anchors.H.rows() != dataset.features.rows()) {
    throw std::invalid_argument("anchor features and data have different dimensions");
  }

  const Eigen::MatrixXd& H = anchors.H;
  Eigen::MatrixXd Q = 2.0 * (H.transpose() * H);
  Q.diagonal().array() += 2.0 * config.alpha;
  const Eigen::MatrixXd neg2_HtX = -2.0 * (H.transpose() * dataset.features);

  FrankWolfeConfig fw;
  fw.max_iters = config.max_inner;
  fw.tol = config.fw_tol;
  fw.curvature_tol = config.curvature_tol;

  AnchorGraph graph;
  graph.Z = Eigen::MatrixXd::Constant(m, n, 1.0 / m);
  parallel_for(
      n,
      [&](long long begin, long long end) {
        for (long long i = begin; i < end; ++i) {
          graph.Z.col(i) =
              minimize_quadratic_on_simplex(Q, neg2_HtX.col(i), graph.Z.col(i), fw).z;
        }
      },
      config.threads);
  validate_anchor_graph(graph);
  return graph;
}

}  // namespace anchorfair
