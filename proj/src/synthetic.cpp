#include "anchorfair/synthetic.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

#include "anchorfair/core.hpp"

namespace anchorfair {

namespace {

double uniform01(std::mt19937_64& gen) {
  return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

}  // namespace

Dataset gen_synthetic(int n, unsigned long long seed,
                      const SyntheticParams& params) {
  if (n < 4) {
    throw std::invalid_argument("need n >= 4 for a two-cluster dataset, got " +
                                std::to_string(n));
  }
  if (params.group0_given_cluster0 < 0.0 || params.group0_given_cluster0 > 1.0 ||
      params.group0_given_cluster1 < 0.0 || params.group0_given_cluster1 > 1.0) {
    throw std::invalid_argument("group probabilities must lie in [0, 1]");
  }

  constexpr double two_pi = 6.283185307179586;
  std::mt19937_64 gen(seed);
  Eigen::MatrixXd features(2, n);
  std::vector<long long> groups(n);
  std::vector<int> truth(n);
  for (int i = 0; i < n; ++i) {
    const int c = uniform01(gen) < 0.5 ? 0 : 1;
    const double u1 = uniform01(gen);
    const double u2 = uniform01(gen);
    const double radius = std::sqrt(-2.0 * std::log(1.0 - u1));
    features(0, i) = (c == 0 ? -params.separation : params.separation) +
                     radius * std::cos(two_pi * u2);
    features(1, i) = radius * std::sin(two_pi * u2);
    const double p0 = c == 0 ? params.group0_given_cluster0
                             : params.group0_given_cluster1;
    groups[i] = uniform01(gen) < p0 ? 0 : 1;
    truth[i] = c;
  }
  return validate_dataset(features, groups, &truth);
}

}  // namespace anchorfair
