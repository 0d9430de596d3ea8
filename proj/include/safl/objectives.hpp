#pragma once

// Convex per-sample losses, their gradients and the dataset-level quantities
// (risk, curvature constants, arg-min) used by the simulator and the bounds.

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <type_traits>

#include "safl/types.hpp"

namespace safl {

enum class LossKind { least_squares, ridge, lasso, logistic };

std::string to_string(LossKind kind);
LossKind loss_kind_from_string(const std::string& name);

template <typename Scalar>
struct Objective {
  LossKind kind = LossKind::least_squares;
  Scalar reg = 0;
  Index dim = 0;     // feature dimension d
  int classes = 0;   // logistic only

  static Objective least_squares(Index d) { return {LossKind::least_squares, 0, d, 0}; }
  static Objective ridge(Index d, Scalar reg) { return checked({LossKind::ridge, reg, d, 0}); }
  static Objective lasso(Index d, Scalar reg = 1) { return checked({LossKind::lasso, reg, d, 0}); }
  static Objective logistic(Index d, int classes, Scalar reg) {
    return checked({LossKind::logistic, reg, d, classes});
  }

  static Objective checked(Objective obj) {
    if (obj.dim < 1) throw std::invalid_argument("objective: dimension must be >= 1");
    if (obj.kind != LossKind::least_squares && !(obj.reg > 0))
      throw std::invalid_argument("objective: reg must be > 0 for " + to_string(obj.kind));
    if (obj.kind == LossKind::logistic && obj.classes < 2)
      throw std::invalid_argument("objective: logistic needs at least 2 classes");
    return obj;
  }

  Index param_size() const { return kind == LossKind::logistic ? dim * classes : dim; }
  bool smooth() const { return kind != LossKind::lasso; }
  bool classification() const { return kind == LossKind::logistic; }
};

using ObjectiveXd = Objective<double>;

template <typename Scalar>
struct CurvatureBounds {
  Scalar mu = 0;
  Scalar lambda = 0;
  Scalar sigma_sq = 0;
};

class ConvergenceFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

template <typename Scalar>
void check_dims(const Objective<Scalar>& obj, const Vector<Scalar>& w,
                const Eigen::Ref<const Vector<Scalar>>& x) {
  if (w.size() != obj.param_size())
    throw DimensionMismatch("parameter length " + std::to_string(w.size()) + " != " +
                            std::to_string(obj.param_size()));
  if (x.size() != obj.dim)
    throw DimensionMismatch("feature length " + std::to_string(x.size()) + " != " +
                            std::to_string(obj.dim));
}

template <typename Scalar>
void require_smooth(const Objective<Scalar>& obj, const char* what) {
  if (!obj.smooth())
    throw UnsupportedOperation(std::string(what) + " is not defined for the lasso objective");
}

// Row-major C x d view of the flat logistic parameter vector.
template <typename Scalar>
auto class_weights(const Vector<Scalar>& w, const Objective<Scalar>& obj) {
  return Eigen::Map<const Matrix<Scalar>>(w.data(), obj.classes, obj.dim);
}

template <typename Scalar>
Vector<Scalar> softmax(const Vector<Scalar>& logits) {
  Vector<Scalar> p = (logits.array() - logits.maxCoeff()).exp();
  return p / p.sum();
}

template <typename Scalar>
int class_index(const Objective<Scalar>& obj, Scalar y) {
  const auto c = static_cast<int>(std::lround(y));
  if (c < 0 || c >= obj.classes || static_cast<Scalar>(c) != y)
    throw std::invalid_argument("class label " + std::to_string(static_cast<double>(y)) +
                                " out of range");
  return c;
}

}  // namespace detail

template <typename Scalar>
using FeatureRef = std::type_identity_t<Eigen::Ref<const Vector<Scalar>>>;

template <typename Scalar>
using ParamArg = std::type_identity_t<Vector<Scalar>>;

template <typename Scalar>
Scalar loss(const Objective<Scalar>& obj, const ParamArg<Scalar>& w, FeatureRef<Scalar> x,
            std::type_identity_t<Scalar> y) {
  detail::check_dims(obj, w, x);
  switch (obj.kind) {
    case LossKind::least_squares: {
      const Scalar r = x.dot(w) - y;
      return Scalar(0.5) * r * r;
    }
    case LossKind::ridge: {
      const Scalar r = x.dot(w) - y;
      return Scalar(0.5) * r * r + Scalar(0.5) * obj.reg * w.squaredNorm();
    }
    case LossKind::lasso: {
      const Scalar r = y - x.dot(w);
      return r * r + obj.reg * w.template lpNorm<1>();
    }
    case LossKind::logistic: {
      const Vector<Scalar> logits = detail::class_weights(w, obj) * x;
      const Scalar m = logits.maxCoeff();
      const Scalar lse = m + std::log((logits.array() - m).exp().sum());
      return lse - logits(detail::class_index(obj, y)) + Scalar(0.5) * obj.reg * w.squaredNorm();
    }
  }
  return 0;
}

template <typename Scalar>
Vector<Scalar> grad(const Objective<Scalar>& obj, const ParamArg<Scalar>& w, FeatureRef<Scalar> x,
                    std::type_identity_t<Scalar> y) {
  detail::require_smooth(obj, "grad");
  detail::check_dims(obj, w, x);
  Vector<Scalar> g;
  switch (obj.kind) {
    case LossKind::least_squares:
    case LossKind::ridge: {
      g = (x.dot(w) - y) * x;
      if (obj.kind == LossKind::ridge) g += obj.reg * w;
      break;
    }
    case LossKind::logistic: {
      Vector<Scalar> p = detail::softmax<Scalar>(detail::class_weights(w, obj) * x);
      p(detail::class_index(obj, y)) -= 1;
      g.resize(obj.param_size());
      Eigen::Map<Matrix<Scalar>>(g.data(), obj.classes, obj.dim) = p * x.transpose();
      g += obj.reg * w;
      break;
    }
    case LossKind::lasso:
      break;
  }
  return g;
}

template <typename Scalar>
Scalar empirical_risk(const Objective<Scalar>& obj, const ParamArg<Scalar>& w,
                      const Dataset<Scalar>& data) {
  if (data.empty()) throw std::invalid_argument("empirical_risk: empty dataset");
  Scalar total = 0;
  for (Index i = 0; i < data.size(); ++i) total += loss(obj, w, data.features.row(i).transpose(), data.targets(i));
  return total / static_cast<Scalar>(data.size());
}

// Mean of the per-sample gradients.
template <typename Scalar>
Vector<Scalar> full_gradient(const Objective<Scalar>& obj, const ParamArg<Scalar>& w,
                             const Dataset<Scalar>& data) {
  detail::require_smooth(obj, "full_gradient");
  if (data.empty()) throw std::invalid_argument("full_gradient: empty dataset");
  if (w.size() != obj.param_size() || data.dim() != obj.dim)
    throw DimensionMismatch("full_gradient: dimension mismatch");
  const auto m = static_cast<Scalar>(data.size());
  Vector<Scalar> g;
  if (obj.kind == LossKind::logistic) {
    Matrix<Scalar> probs = data.features * detail::class_weights(w, obj).transpose();  // m x C
    for (Index i = 0; i < probs.rows(); ++i) {
      probs.row(i) = detail::softmax<Scalar>(probs.row(i).transpose()).transpose();
      probs(i, detail::class_index(obj, data.targets(i))) -= 1;
    }
    g.resize(obj.param_size());
    Eigen::Map<Matrix<Scalar>>(g.data(), obj.classes, obj.dim) =
        probs.transpose() * data.features / m;
  } else {
    g = data.features.transpose() * (data.features * w - data.targets) / m;
  }
  if (obj.kind != LossKind::least_squares) g += obj.reg * w;
  return g;
}

// Hessian of the empirical risk at w.
template <typename Scalar>
Matrix<Scalar> hessian(const Objective<Scalar>& obj, const ParamArg<Scalar>& w,
                       const Dataset<Scalar>& data) {
  detail::require_smooth(obj, "hessian");
  if (data.empty()) throw std::invalid_argument("hessian: empty dataset");
  const Index p = obj.param_size();
  const auto m = static_cast<Scalar>(data.size());
  Matrix<Scalar> h = Matrix<Scalar>::Zero(p, p);
  if (obj.kind == LossKind::logistic) {
    for (Index i = 0; i < data.size(); ++i) {
      const Vector<Scalar> x = data.features.row(i).transpose();
      const Vector<Scalar> pr = detail::softmax<Scalar>(detail::class_weights(w, obj) * x);
      const Matrix<Scalar> s = Matrix<Scalar>(pr.asDiagonal()) - pr * pr.transpose();
      const Matrix<Scalar> xx = x * x.transpose();
      for (int a = 0; a < obj.classes; ++a)
        for (int b = 0; b < obj.classes; ++b)
          h.block(a * obj.dim, b * obj.dim, obj.dim, obj.dim) += s(a, b) * xx;
    }
    h /= m;
  } else {
    h = data.features.transpose() * data.features / m;
  }
  if (obj.kind != LossKind::least_squares) h.diagonal().array() += obj.reg;
  return h;
}

// The toy lasso cost sum_i (y_i - x_i^T w)^2 + reg * ||w||_1, with the penalty
// counted once per dataset rather than once per sample.
template <typename Scalar>
Scalar lasso_cost(const Objective<Scalar>& obj, const ParamArg<Scalar>& w, const Dataset<Scalar>& data) {
  if (obj.kind != LossKind::lasso) throw UnsupportedOperation("lasso_cost needs the lasso objective");
  if (w.size() != obj.dim || data.dim() != obj.dim) throw DimensionMismatch("lasso_cost");
  return (data.targets - data.features * w).squaredNorm() + obj.reg * w.template lpNorm<1>();
}

struct OracleOptions {
  double tolerance = 1e-10;
  long max_iterations = 2'000'000;
};

template <typename Scalar>
Vector<Scalar> optimum_oracle(const Objective<Scalar>& obj, const Dataset<Scalar>& data,
                              const OracleOptions& opts = {}) {
  if (data.empty()) throw std::invalid_argument("optimum_oracle: empty dataset");
  if (data.dim() != obj.dim) throw DimensionMismatch("optimum_oracle: feature dimension");
  const Index d = obj.dim;
  const auto m = static_cast<Scalar>(data.size());
  switch (obj.kind) {
    case LossKind::least_squares:
    case LossKind::ridge: {
      Matrix<Scalar> gram = data.features.transpose() * data.features / m;
      gram.diagonal().array() += obj.reg;
      const Vector<Scalar> rhs = data.features.transpose() * data.targets / m;
      if (obj.kind == LossKind::least_squares)
        return gram.completeOrthogonalDecomposition().solve(rhs);
      return gram.ldlt().solve(rhs);
    }
    case LossKind::lasso: {
      // Exact coordinate minimization of lasso_cost; a single sweep is exact when
      // the columns are orthogonal, as in the two-device toy.
      Vector<Scalar> w = Vector<Scalar>::Zero(d);
      Vector<Scalar> residual = data.targets;
      for (long sweep = 0; sweep < opts.max_iterations; ++sweep) {
        Scalar max_change = 0;
        for (Index j = 0; j < d; ++j) {
          const auto col = data.features.col(j);
          const Scalar a = col.squaredNorm();
          const Scalar old = w(j);
          Scalar next = 0;
          if (a > 0) {
            const Scalar b = col.dot(residual) + a * old;
            const Scalar shrunk = std::abs(b) - obj.reg / 2;
            next = shrunk > 0 ? std::copysign(shrunk, b) / a : Scalar(0);
          }
          if (next != old) {
            residual -= (next - old) * col;
            w(j) = next;
            max_change = std::max(max_change, std::abs(next - old));
          }
        }
        if (max_change <= opts.tolerance) return w;
      }
      throw ConvergenceFailure("optimum_oracle: lasso coordinate descent did not converge");
    }
    case LossKind::logistic: {
      const Matrix<Scalar> gram = data.features.transpose() * data.features / m;
      Eigen::SelfAdjointEigenSolver<Matrix<Scalar>> eig(gram, Eigen::EigenvaluesOnly);
      const Scalar smooth = obj.reg + Scalar(0.5) * eig.eigenvalues().maxCoeff();
      const Scalar strong = obj.reg;
      // Nesterov's constant-momentum scheme for smooth strongly convex problems.
      const Scalar kappa = smooth / strong;
      const Scalar beta = (std::sqrt(kappa) - 1) / (std::sqrt(kappa) + 1);
      Vector<Scalar> w = Vector<Scalar>::Zero(obj.param_size());
      Vector<Scalar> prev = w;
      for (long it = 0; it < opts.max_iterations; ++it) {
        const Vector<Scalar> look = w + beta * (w - prev);
        const Vector<Scalar> g = full_gradient(obj, look, data);
        prev = w;
        w = look - g / smooth;
        if (it % 16 == 0 && full_gradient(obj, w, data).norm() <= Scalar(opts.tolerance)) return w;
      }
      throw ConvergenceFailure("optimum_oracle: logistic gradient descent did not reach tolerance");
    }
  }
  return {};
}

// Curvature constants of the empirical risk. mu/lambda bound the Hessian
// spectrum; sigma_sq is the largest squared deviation of a per-sample gradient
// from the mean gradient, evaluated at `at` (the dataset optimum by default).
// For the logistic loss the Hessian depends on w, so the reported constants are
// the global bounds reg and reg + eig_max(X^T X / m) / 2.
template <typename Scalar>
CurvatureBounds<Scalar> curvature(const Objective<Scalar>& obj, const Dataset<Scalar>& data,
                                  const std::optional<Vector<Scalar>>& at = std::nullopt) {
  detail::require_smooth(obj, "curvature");
  if (data.empty()) throw std::invalid_argument("curvature: empty dataset");
  const auto m = static_cast<Scalar>(data.size());
  const Matrix<Scalar> gram = data.features.transpose() * data.features / m;
  Eigen::SelfAdjointEigenSolver<Matrix<Scalar>> eig(gram, Eigen::EigenvaluesOnly);
  CurvatureBounds<Scalar> out;
  if (obj.kind == LossKind::logistic) {
    out.mu = obj.reg;
    out.lambda = obj.reg + Scalar(0.5) * eig.eigenvalues().maxCoeff();
  } else {
    out.mu = std::max(Scalar(0), eig.eigenvalues().minCoeff()) + obj.reg;
    out.lambda = eig.eigenvalues().maxCoeff() + obj.reg;
  }
  const Vector<Scalar> point = at ? *at : optimum_oracle(obj, data);
  const Vector<Scalar> mean = full_gradient(obj, point, data);
  for (Index i = 0; i < data.size(); ++i) {
    const Scalar dev = (grad(obj, point, data.features.row(i).transpose(), data.targets(i)) - mean).squaredNorm();
    out.sigma_sq = std::max(out.sigma_sq, dev);
  }
  return out;
}

template <typename Scalar>
int predict_class(const Objective<Scalar>& obj, const ParamArg<Scalar>& w, FeatureRef<Scalar> x) {
  if (!obj.classification()) throw UnsupportedOperation("predict_class needs a classification objective");
  detail::check_dims(obj, w, x);
  Index best = 0;
  (detail::class_weights(w, obj) * x).maxCoeff(&best);
  return static_cast<int>(best);
}

}  // namespace safl
