#include "safl/scenarios.hpp"

#include <Eigen/QR>

#include <cmath>
#include <random>

#include "safl/rng.hpp"

namespace safl {

Task isotropic_ridge_task(const IsotropicRidgeSpec& spec) {
  if (spec.n < 1 || spec.d < 1) throw std::invalid_argument("isotropic ridge: n and d must be >= 1");
  if (!(spec.feature_scale > 0)) throw std::invalid_argument("isotropic ridge: feature_scale must be > 0");
  Rng rng = make_stream(spec.seed, Stream::data, 0);
  std::normal_distribution<double> normal(0.0, 1.0);
  const VectorXd w_true = VectorXd::NullaryExpr(spec.d, [&] { return normal(rng); });
  const double radius = std::sqrt(spec.feature_scale * static_cast<double>(spec.d));

  std::vector<Shard> shards(static_cast<std::size_t>(spec.n));
  for (auto& shard : shards) {
    const Eigen::MatrixXd g = Eigen::MatrixXd::NullaryExpr(spec.d, spec.d, [&] { return normal(rng); });
    const Eigen::MatrixXd q = Eigen::HouseholderQR<Eigen::MatrixXd>(g).householderQ();
    shard.train.features.resize(2 * spec.d, spec.d);
    for (Index j = 0; j < spec.d; ++j) {
      shard.train.features.row(2 * j) = radius * q.col(j).transpose();
      shard.train.features.row(2 * j + 1) = -radius * q.col(j).transpose();
    }
    shard.train.targets = shard.train.features * w_true;
    shard.holdout = DatasetXd{MatrixXd(0, spec.d), VectorXd(0)};
  }
  return Task::from_shards(ObjectiveXd::ridge(spec.d, spec.reg), std::move(shards));
}

DatasetXd gaussian_classes_dataset(const GaussianClassesSpec& spec) {
  if (spec.classes < 2 || spec.d < 1 || spec.samples_per_class < 1)
    throw std::invalid_argument("gaussian classes: need >= 2 classes, d >= 1 and samples");
  Rng rng = make_stream(spec.seed, Stream::data, 1);
  std::normal_distribution<double> normal(0.0, 1.0);
  MatrixXd centers(spec.classes, spec.d);
  for (int c = 0; c < spec.classes; ++c) {
    VectorXd v = VectorXd::NullaryExpr(spec.d, [&] { return normal(rng); });
    centers.row(c) = spec.separation * v.normalized().transpose();
  }
  DatasetXd out;
  const Index m = spec.classes * spec.samples_per_class;
  out.features.resize(m, spec.d);
  out.targets.resize(m);
  for (Index i = 0; i < m; ++i) {
    const auto c = static_cast<int>(i % spec.classes);
    for (Index j = 0; j < spec.d; ++j) out.features(i, j) = centers(c, j) + normal(rng);
    out.targets(i) = c;
  }
  return out;
}

std::vector<Shard> lasso_toy_shards() {
  std::vector<Shard> shards(2);
  shards[0].train.features = (MatrixXd(1, 2) << 0.25, 0.0).finished();
  shards[0].train.targets = (VectorXd(1) << -1.0).finished();
  shards[1].train.features = (MatrixXd(1, 2) << 0.0, 1.5).finished();
  shards[1].train.targets = (VectorXd(1) << 1.0).finished();
  for (auto& s : shards) s.holdout = DatasetXd{MatrixXd(0, 2), VectorXd(0)};
  return shards;
}

}  // namespace safl
