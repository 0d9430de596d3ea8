#pragma once

#include <cmath>
#include <functional>
#include <random>

#include "safl/objectives.hpp"
#include "safl/rng.hpp"

namespace safl::test {

inline DatasetXd random_regression(Index m, Index d, std::uint64_t seed, double noise = 0.1) {
  Rng rng(seed);
  std::normal_distribution<double> normal;
  DatasetXd data;
  data.features = MatrixXd::NullaryExpr(m, d, [&] { return normal(rng); });
  const VectorXd w = VectorXd::NullaryExpr(d, [&] { return normal(rng); });
  data.targets = data.features * w + noise * VectorXd::NullaryExpr(m, [&] { return normal(rng); });
  return data;
}

inline DatasetXd random_classes(Index m, Index d, int classes, std::uint64_t seed) {
  Rng rng(seed);
  std::normal_distribution<double> normal;
  DatasetXd data;
  data.features = MatrixXd::NullaryExpr(m, d, [&] { return normal(rng); });
  data.targets.resize(m);
  for (Index i = 0; i < m; ++i) data.targets(i) = static_cast<double>(i % classes);
  return data;
}

inline VectorXd random_vector(Index d, Rng& rng, double scale = 1.0) {
  std::normal_distribution<double> normal(0.0, scale);
  return VectorXd::NullaryExpr(d, [&] { return normal(rng); });
}

// Central differences, one coordinate at a time.
inline VectorXd finite_difference(const std::function<double(const VectorXd&)>& f, const VectorXd& w,
                                  double h = 1e-6) {
  VectorXd g(w.size());
  for (Index j = 0; j < w.size(); ++j) {
    VectorXd up = w, down = w;
    up(j) += h;
    down(j) -= h;
    g(j) = (f(up) - f(down)) / (2 * h);
  }
  return g;
}

// Extreme eigenvalues of a symmetric positive semi-definite matrix by power
// iteration on A and on (shift I - A).
inline std::pair<double, double> power_iteration_extremes(const MatrixXd& a, int iterations = 20000) {
  auto dominant = [&](const MatrixXd& m) {
    VectorXd v = VectorXd::Ones(m.rows()) / std::sqrt(static_cast<double>(m.rows()));
    v(0) += 0.3;
    double value = 0;
    for (int i = 0; i < iterations; ++i) {
      VectorXd next = m * v;
      const double norm = next.norm();
      if (norm == 0) return 0.0;
      v = next / norm;
      value = v.dot(m * v);
    }
    return value;
  };
  const double top = dominant(a);
  const double shift = top + 1.0;
  const MatrixXd flipped = shift * MatrixXd::Identity(a.rows(), a.cols()) - a;
  return {shift - dominant(flipped), top};
}

inline double mean_of(const std::vector<double>& v) {
  double s = 0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

}  // namespace safl::test
