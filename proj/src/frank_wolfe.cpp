#include "anchorfair/frank_wolfe.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace anchorfair {

FrankWolfeResult minimize_quadratic_on_simplex(const Eigen::MatrixXd& Q,
                                               const Eigen::VectorXd& c,
                                               const Eigen::VectorXd& z0,
                                               const FrankWolfeConfig& config) {
  const Eigen::Index m = Q.rows();
  if (Q.cols() != m) {
    throw std::invalid_argument("Q must be square");
  }
  if (c.size() != m || z0.size() != m) {
    throw std::invalid_argument("c and z0 must match Q's dimension");
  }
  if (m == 0) {
    throw std::invalid_argument("empty problem");
  }
  if (z0.minCoeff() < -1e-12 || std::abs(z0.sum() - 1.0) > 1e-9) {
    throw std::invalid_argument("warm start z0 is not on the simplex (sum=" +
                                std::to_string(z0.sum()) + ")");
  }

  FrankWolfeResult result;
  result.z = z0;
  Eigen::VectorXd Qz = Q * result.z;

  int steps = 0;
  while (true) {
    // gradient g = Qz + c; pick the vertex with the smallest entry
    Eigen::Index j = 0;
    double gj = Qz[0] + c[0];
    for (Eigen::Index i = 1; i < m; ++i) {
      const double gi = Qz[i] + c[i];
      if (gi < gj) {
        gj = gi;
        j = i;
      }
    }
    const double delta = gj - (Qz.dot(result.z) + c.dot(result.z));
    result.gap = -delta;
    if (delta >= -config.tol) {
      result.converged = true;
      break;
    }
    if (steps >= config.max_iters) break;

    // exact line search along d = e_j - z: f(z + g*d) is quadratic in g with
    // slope delta and curvature d'Qd
    const double curv = Q(j, j) - 2.0 * Qz[j] + result.z.dot(Qz);
    const double gamma =
        curv <= config.curvature_tol
            ? 1.0
            : std::min(1.0, std::max(0.0, -delta / curv));
    result.z *= (1.0 - gamma);
    result.z[j] += gamma;
    Qz *= (1.0 - gamma);
    Qz += gamma * Q.col(j);
    steps++;
  }
  result.iterations = steps;
  return result;
}

}  // namespace anchorfair
