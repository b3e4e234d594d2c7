#pragma once

#include <Eigen/Core>

#include <vector>

#include "anchorfair/constraint_table.hpp"
#include "anchorfair/frank_wolfe.hpp"
#include "anchorfair/types.hpp"

namespace anchorfair {

struct SolverConfig {
  double alpha = 0.01;   // ridge weight on Z
  double rho0 = 1.0;     // initial penalty
  double eps = 1e-4;     // outer tolerance on max(primal, dual) residual
  int max_outer = 500;
  int max_inner = 200;   // Frank-Wolfe step budget per column
  double fw_tol = 1e-8;
  double curvature_tol = 1e-12;
  double beta = 2.0;     // penalty multiplier
  double tau = 10.0;     // residual imbalance trigger
  int threads = 0;       // 0 = hardware concurrency
};

struct AdmmTraceEntry {
  int iteration = 0;
  double objective = 0.0;  // ||X - HZ||_F^2 + alpha ||Z||_F^2
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  double rho = 0.0;
};

struct AdmmState {
  Eigen::MatrixXd Z;       // simplex columns
  Eigen::MatrixXd E;       // block-feasible copy (may dip negative)
  Eigen::MatrixXd Lambda;  // dual
  double rho = 1.0;
  int iteration = 0;
  double primal_residual = 0.0;  // ||Z - E||_F
  double dual_residual = 0.0;    // rho ||E_new - E_old||_F
  std::vector<AdmmTraceEntry> trace;
};

struct AdmmSolveResult {
  AnchorGraph graph;
  AdmmState state;
  bool converged = false;
};

double graph_objective(const Eigen::MatrixXd& X, const Eigen::MatrixXd& H,
                       const Eigen::MatrixXd& Z, double alpha);

// One pass of per-column simplex solves, warm-started from the current Z.
// gram = H'H; neg2_HtX = -2 H'X. Each column i minimizes
// ||x_i - H z||^2 + alpha ||z||^2 + (rho/2) ||z - e_i + lambda_i/rho||^2
// over the simplex, which is 1/2 z'Qz + c_i'z with Q = 2(gram + (alpha +
// rho/2) I) and c_i = -2 H'x_i - rho e_i + lambda_i. Columns are independent
// and run under parallel_for.
void update_z(AdmmState& state, const Eigen::MatrixXd& gram,
              const Eigen::MatrixXd& neg2_HtX, const SolverConfig& config);

// Euclidean projection of R onto the affine set of prescribed block sums:
// every (anchor_blocks[l] x sample_blocks[r]) block of the result sums to
// targets(l, r), shifting each block uniformly. Throws when a block has a
// positive target but no cells.
Eigen::MatrixXd project_block_sums(const Eigen::MatrixXd& R,
                                   const ConstraintTable& table);

// E step: project Z + Lambda/rho onto the constraint set.
void update_e(AdmmState& state, const ConstraintTable& table);

// Residual-balancing penalty update; no-op unless one residual dominates
// the other by a factor of tau. Lambda is an unscaled dual estimate and is
// not touched when rho changes.
void update_rho(AdmmState& state, double beta, double tau);

// Full constrained solve. The trace starts with the uniform initializer
// (iteration 0, zero residuals) and gains one entry per outer iteration.
AdmmSolveResult solve_fair_graph(const Dataset& dataset,
                                 const AnchorSet& anchors,
                                 const AnchorLabeling& labeling,
                                 const SolverConfig& config);

// Ablation variant: same reconstruction objective, simplex columns only,
// no block constraints. Single pass of independent column solves.
AnchorGraph solve_unconstrained_graph(const Dataset& dataset,
                                      const AnchorSet& anchors,
                                      const SolverConfig& config);

}  // namespace anchorfair
