#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace safl {

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

using VectorXd = Vector<double>;
using MatrixXd = Matrix<double>;
using Index = Eigen::Index;

// Samples are stored row-wise: features.row(i) is x_i, targets(i) is y_i.
// For classification the target holds the class index.
template <typename Scalar>
struct Dataset {
  Matrix<Scalar> features;
  Vector<Scalar> targets;

  Index size() const { return features.rows(); }
  Index dim() const { return features.cols(); }
  bool empty() const { return features.rows() == 0; }
};

using DatasetXd = Dataset<double>;

template <typename Scalar>
Dataset<Scalar> select_rows(const Dataset<Scalar>& data, const std::vector<Index>& rows) {
  Dataset<Scalar> out;
  out.features.resize(static_cast<Index>(rows.size()), data.dim());
  out.targets.resize(static_cast<Index>(rows.size()));
  for (Index i = 0; i < static_cast<Index>(rows.size()); ++i) {
    out.features.row(i) = data.features.row(rows[static_cast<std::size_t>(i)]);
    out.targets(i) = data.targets(rows[static_cast<std::size_t>(i)]);
  }
  return out;
}

template <typename Scalar>
Dataset<Scalar> concatenate(const Dataset<Scalar>& a, const Dataset<Scalar>& b) {
  if (a.empty()) return b;
  if (b.empty()) return a;
  if (a.dim() != b.dim()) throw std::invalid_argument("concatenate: feature dimension mismatch");
  Dataset<Scalar> out;
  out.features.resize(a.size() + b.size(), a.dim());
  out.features << a.features, b.features;
  out.targets.resize(a.size() + b.size());
  out.targets << a.targets, b.targets;
  return out;
}

class DimensionMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class UnsupportedOperation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class NonFiniteError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace safl
