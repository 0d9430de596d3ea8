#pragma once

// Gap-gated uploads: a device compares the accuracy of the last global model
// with that of its fresh local model and uploads with probability
// exp(-gap / nu).

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "safl/objectives.hpp"
#include "safl/rng.hpp"

namespace safl {

enum class AccuracyProxy { holdout_accuracy, inverse_risk };

struct GateConfig {
  double nu = 0.1;
  double eps_div = 1e-6;
  AccuracyProxy proxy = AccuracyProxy::holdout_accuracy;

  void validate() const {
    if (!(nu > 0)) throw std::invalid_argument("gate: nu must be > 0");
    if (!(eps_div > 0)) throw std::invalid_argument("gate: eps_div must be > 0");
  }
};

struct GateState {
  double q = 1.0;
};

template <typename Scalar>
Scalar accuracy_proxy(const ParamArg<Scalar>& model, const Dataset<Scalar>& eval_set,
                      const Objective<Scalar>& obj, AccuracyProxy kind) {
  if (eval_set.empty()) throw std::invalid_argument("accuracy_proxy: empty evaluation set");
  if (kind == AccuracyProxy::inverse_risk) return Scalar(1) / (Scalar(1) + empirical_risk(obj, model, eval_set));
  if (!obj.classification())
    throw UnsupportedOperation("holdout_accuracy needs a classification objective");
  Index correct = 0;
  for (Index i = 0; i < eval_set.size(); ++i)
    if (predict_class(obj, model, eval_set.features.row(i).transpose()) ==
        detail::class_index(obj, eval_set.targets(i)))
      ++correct;
  return static_cast<Scalar>(correct) / static_cast<Scalar>(eval_set.size());
}

template <typename Scalar>
Scalar performance_gap(Scalar h_global, Scalar h_local, Scalar eps_div) {
  if (h_global < 0 || h_local < 0) throw std::invalid_argument("performance_gap: accuracies must be >= 0");
  return std::abs(h_global - h_local) / (h_global + h_local + eps_div);
}

template <typename Scalar>
Scalar upload_probability(Scalar gap, Scalar nu) {
  if (gap < 0) throw std::invalid_argument("upload_probability: gap must be >= 0");
  if (!(nu > 0)) throw std::invalid_argument("upload_probability: nu must be > 0");
  // exp(-gap/nu) is positive; keep it so when it underflows.
  return std::max(std::exp(-gap / nu), std::numeric_limits<Scalar>::min());
}

inline bool decide_upload(double q, Rng& rng) {
  if (!(q > 0 && q <= 1)) throw std::invalid_argument("decide_upload: q must lie in (0, 1]");
  return uniform01(rng) < q;
}

}  // namespace safl
