#pragma once

// Synthetic tasks with computable optima.

#include <cstdint>

#include "safl/orchestrator.hpp"
#include "safl/partitioner.hpp"

namespace safl {

// Regression shards whose second-moment matrix is exactly feature_scale * I on
// every device: device k holds the 2d rows +-sqrt(feature_scale * d) q_j for a
// random orthonormal basis {q_j}. Labels are noiseless, y = x^T w_true, so all
// devices share one ridge optimum and the stochastic-gradient noise comes only
// from which row is drawn.
struct IsotropicRidgeSpec {
  Index n = 20;
  Index d = 10;
  double reg = 1.0;
  double feature_scale = 0.1;
  std::uint64_t seed = 0;
};

Task isotropic_ridge_task(const IsotropicRidgeSpec& spec);

// Gaussian class clusters: class c has mean separation * m_c with m_c drawn on
// the unit sphere, and identity covariance.
struct GaussianClassesSpec {
  int classes = 3;
  Index d = 8;
  Index samples_per_class = 2000;
  double separation = 2.0;
  std::uint64_t seed = 0;
};

DatasetXd gaussian_classes_dataset(const GaussianClassesSpec& spec);

// The two single-sample devices of the lasso toy:
// D1 = {([1/4, 0], -1)}, D2 = {([0, 3/2], 1)}.
std::vector<Shard> lasso_toy_shards();

}  // namespace safl
