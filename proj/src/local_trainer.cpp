#include "safl/local_trainer.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <vector>

namespace safl {

bool satisfies_theorem1_rate(const LrSchedule& s, double mu, double lambda) {
  return s.kind == LrSchedule::Kind::constant && mu > 0 && lambda >= mu && s.alpha < 1.0 / (2 * lambda - mu);
}

bool satisfies_corollary1_rate(const LrSchedule& s, double mu) {
  return s.kind == LrSchedule::Kind::inverse && mu > 0 && s.alpha > (2 - std::sqrt(2.0)) / mu &&
         s.alpha < (2 + std::sqrt(2.0)) / mu;
}

void require_theorem1_rate(const LrSchedule& s, double mu, double lambda) {
  if (!satisfies_theorem1_rate(s, mu, lambda))
    throw std::invalid_argument("constant rate " + std::to_string(s.alpha) + " must be below 1/(2*lambda - mu) = " +
                                std::to_string(1.0 / (2 * lambda - mu)));
}

void require_corollary1_rate(const LrSchedule& s, double mu) {
  if (!satisfies_corollary1_rate(s, mu))
    throw std::invalid_argument("inverse rate alpha_0 = " + std::to_string(s.alpha) + " must lie in ((2-sqrt2)/mu, (2+sqrt2)/mu)");
}

LocalResult run_local_epochs(DeviceState& device, const ObjectiveXd& obj, int epochs,
                             const LrSchedule& schedule, SampleOrder order) {
  if (epochs < 1) throw std::invalid_argument("run_local_epochs: E must be >= 1");
  const Index m = device.shard.size();
  if (m == 0) throw std::invalid_argument("run_local_epochs: empty shard");

  LocalResult out{device.w, 0};
  std::vector<Index> perm(static_cast<std::size_t>(m));
  std::iota(perm.begin(), perm.end(), Index{0});
  std::uniform_int_distribution<Index> pick(0, m - 1);
  for (int e = 0; e < epochs; ++e) {
    if (order == SampleOrder::shuffle) std::shuffle(perm.begin(), perm.end(), device.sgd_rng);
    for (Index i = 0; i < m; ++i) {
      const Index row = order == SampleOrder::iid ? pick(device.sgd_rng) : perm[static_cast<std::size_t>(i)];
      ++device.steps;
      out.z = sgd_step(out.z, device.shard.features.row(row).transpose(), device.shard.targets(row), obj,
                       schedule.rate(device.steps));
      ++out.steps;
    }
  }
  return out;
}

}  // namespace safl
