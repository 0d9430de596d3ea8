#pragma once

// Per-device SGD producing the locally trained model z.

#include <cmath>
#include <stdexcept>
#include <string>

#include "safl/device.hpp"
#include "safl/objectives.hpp"

namespace safl {

struct LrSchedule {
  enum class Kind { constant, inverse };
  Kind kind = Kind::constant;
  double alpha = 0.01;  // alpha, or alpha_0 for the inverse schedule

  static LrSchedule constant(double a) { return checked({Kind::constant, a}); }
  static LrSchedule inverse(double a0) { return checked({Kind::inverse, a0}); }
  static LrSchedule checked(LrSchedule s) {
    if (!(s.alpha > 0)) throw std::invalid_argument("learning rate must be > 0");
    return s;
  }

  // Rate of the step with 1-based index t: alpha or alpha_0 / (t + 1).
  double rate(long t) const { return kind == Kind::constant ? alpha : alpha / static_cast<double>(t + 1); }
};

// Preconditions of the constant-rate and inverse-rate error bounds. These
// validate; they never clamp.
void require_theorem1_rate(const LrSchedule& s, double mu, double lambda);
void require_corollary1_rate(const LrSchedule& s, double mu);
bool satisfies_theorem1_rate(const LrSchedule& s, double mu, double lambda);
bool satisfies_corollary1_rate(const LrSchedule& s, double mu);

enum class SampleOrder { iid, shuffle };

template <typename Scalar>
Vector<Scalar> sgd_step(const ParamArg<Scalar>& w, FeatureRef<Scalar> x, std::type_identity_t<Scalar> y,
                        const Objective<Scalar>& obj, std::type_identity_t<Scalar> alpha) {
  if (alpha < 0) throw std::invalid_argument("sgd_step: alpha must be >= 0");
  Vector<Scalar> g = grad(obj, w, x, y);
  if (!g.allFinite()) throw NonFiniteError("sgd_step: non-finite gradient");
  return w - alpha * g;
}

struct LocalResult {
  VectorXd z;
  long steps = 0;
};

// E passes of m_k single-sample steps starting from device.w. Advances
// device.steps and the device's SGD stream; leaves device.w untouched.
LocalResult run_local_epochs(DeviceState& device, const ObjectiveXd& obj, int epochs,
                             const LrSchedule& schedule, SampleOrder order = SampleOrder::iid);

}  // namespace safl
