#pragma once

#include "anchorfair/types.hpp"

namespace anchorfair {

// Two 2-d Gaussian clusters centered at (-separation, 0) and (+separation, 0)
// with unit covariance. Each sample's true cluster is a fair coin; its
// binary sensitive group is drawn with a cluster-dependent probability, so
// groups correlate with clusters without being separable from them.
struct SyntheticParams {
  double separation = 3.0;
  double group0_given_cluster0 = 0.65;
  double group0_given_cluster1 = 0.35;
};

// Deterministic for a given seed on any platform: uniforms come from the
// raw mt19937_64 stream and normals from an explicit Box-Muller transform,
// sidestepping the unspecified std::normal_distribution algorithm.
Dataset gen_synthetic(int n, unsigned long long seed,
                      const SyntheticParams& params = {});

}  // namespace anchorfair
