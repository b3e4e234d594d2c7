#pragma once

#include <Eigen/Core>

namespace anchorfair {

struct FrankWolfeConfig {
  int max_iters = 200;
  double tol = 1e-8;            // stop once the duality gap drops below this
  double curvature_tol = 1e-12; // below this d'Qd the line search jumps to 1
};

struct FrankWolfeResult {
  Eigen::VectorXd z;
  double gap = 0.0;  // g'(z - e_j) at the returned point
  int iterations = 0;
  bool converged = false;
};

// Minimizes (1/2) z'Qz + c'z over the probability simplex from warm start z0.
// Each step moves toward the vertex with the smallest gradient entry (lowest
// index on ties) with an exact line search; iterates stay on the simplex, so
// callers can feed the result back in as the next warm start.
FrankWolfeResult minimize_quadratic_on_simplex(const Eigen::MatrixXd& Q,
                                               const Eigen::VectorXd& c,
                                               const Eigen::VectorXd& z0,
                                               const FrankWolfeConfig& config = {});

}  // namespace anchorfair
