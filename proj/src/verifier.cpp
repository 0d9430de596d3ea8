#include "safl/verifier.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace safl {

double BoundInputs::zeta() const {
  if (initial_sq_dist.empty()) throw std::invalid_argument("bound inputs: no initial distances");
  return *std::max_element(initial_sq_dist.begin(), initial_sq_dist.end());
}

void BoundInputs::validate() const {
  if (!(mu > 0)) throw std::invalid_argument("bound inputs: mu must be > 0");
  if (!(lambda >= mu)) throw std::invalid_argument("bound inputs: lambda must be >= mu");
  if (!(alpha > 0)) throw std::invalid_argument("bound inputs: alpha must be > 0");
  if (!(epsilon >= 0 && epsilon <= 1)) throw std::invalid_argument("bound inputs: epsilon must lie in [0, 1]");
  if (!(p >= 0 && p <= 1)) throw std::invalid_argument("bound inputs: p must lie in [0, 1]");
  if (q_local < 1) throw std::invalid_argument("bound inputs: q_local must be >= 1");
  if (sigma_sq.size() != eta.size() || eta.empty())
    throw std::invalid_argument("bound inputs: need one sigma^2 and one eta per device");
  for (double s : sigma_sq)
    if (!(s >= 0)) throw std::invalid_argument("bound inputs: sigma^2 must be >= 0");
  for (double e : eta)
    if (!(e >= 0)) throw std::invalid_argument("bound inputs: eta must be >= 0");
  if (std::abs(std::accumulate(eta.begin(), eta.end(), 0.0) - 1.0) > 1e-9)
    throw std::invalid_argument("bound inputs: eta must sum to 1");
  for (double z : initial_sq_dist)
    if (!(z >= 0)) throw std::invalid_argument("bound inputs: initial distances must be >= 0");
  zeta();
}

double theorem1_contraction_constant(const BoundInputs& in) {
  const double ratio = (1 - in.alpha * (2 * in.lambda - in.mu)) / (1 - in.alpha * in.mu);
  return (1 - in.p * (1 - in.epsilon * in.epsilon)) * ratio * ratio;
}

double theorem1_bound(const BoundInputs& in, double t) {
  in.validate();
  if (!(in.alpha < 1.0 / (2 * in.lambda - in.mu)))
    throw std::invalid_argument("theorem1_bound: alpha must be < 1/(2 lambda - mu)");
  if (t < 0) throw std::invalid_argument("theorem1_bound: t must be >= 0");
  const double rho = 1 - in.alpha * in.mu;
  const double c = theorem1_contraction_constant(in);
  const double rho_q = std::pow(rho, 2.0 * static_cast<double>(in.q_local));
  double weighted = 0;
  for (std::size_t k = 0; k < in.eta.size(); ++k) weighted += in.eta[k] * in.eta[k] * in.sigma_sq[k];
  const double transient = std::pow(rho, 2.0 * t) * in.zeta();
  return transient + in.alpha / in.mu * weighted * (1 - rho_q) / (1 - std::exp(-c) * rho_q);
}

double corollary1_constant(const BoundInputs& in) {
  in.validate();
  const double lo = (2 - std::sqrt(2.0)) / in.mu;
  const double hi = (2 + std::sqrt(2.0)) / in.mu;
  if (!(in.alpha > lo && in.alpha < hi))
    throw std::invalid_argument("corollary1: alpha_0 must lie in ((2-sqrt2)/mu, (2+sqrt2)/mu)");
  const double smax = *std::max_element(in.sigma_sq.begin(), in.sigma_sq.end());
  const double gap = 2 - in.mu * in.alpha;
  return std::max(2 * in.alpha * in.alpha * smax / (2 - gap * gap), in.zeta());
}

double corollary1_bound(double c, double t) {
  if (!(c >= 0)) throw std::invalid_argument("corollary1_bound: c must be >= 0");
  if (t < 0) throw std::invalid_argument("corollary1_bound: t must be >= 0");
  return c / (t + 1);
}

double corollary1_bound(const BoundInputs& in, double t) { return corollary1_bound(corollary1_constant(in), t); }

double theorem3_constant(const BoundInputs& in) {
  in.validate();
  if (!(in.alpha > 1.0 / in.mu)) throw std::invalid_argument("theorem3: alpha_0 must be > 1/mu");
  if (in.initial_sq_dist.size() != in.eta.size())
    throw std::invalid_argument("theorem3: need one initial distance per device");
  double noise = 0;
  double start = 0;
  for (std::size_t k = 0; k < in.eta.size(); ++k) {
    noise += in.eta[k] * in.sigma_sq[k];
    start += in.eta[k] * in.initial_sq_dist[k];
  }
  return std::max(in.alpha * in.alpha * noise / (in.mu * in.alpha - 1), start);
}

double theorem3_bound(double c, double t) {
  if (!(c >= 0)) throw std::invalid_argument("theorem3_bound: c must be >= 0");
  if (t < 0) throw std::invalid_argument("theorem3_bound: t must be >= 0");
  return c / (t + 1);
}

double theorem3_bound(const BoundInputs& in, double t) { return theorem3_bound(theorem3_constant(in), t); }

double uniform_weight_floor(const BoundInputs& in) {
  in.validate();
  const double n = static_cast<double>(in.sigma_sq.size());
  const double mean = std::accumulate(in.sigma_sq.begin(), in.sigma_sq.end(), 0.0) / n;
  return in.alpha * mean / (n * in.mu);
}

RateFit fit_rate(const std::vector<double>& mse, FloorMode floor_mode) {
  if (mse.size() < 20) throw std::invalid_argument("fit_rate: need at least 20 points");
  for (double v : mse)
    if (!(v > 0) || !std::isfinite(v)) throw std::invalid_argument("fit_rate: entries must be positive and finite");
  const auto [lo, hi] = std::minmax_element(mse.begin(), mse.end());
  if (*lo == *hi) throw std::invalid_argument("fit_rate: constant series");

  RateFit fit;
  fit.floor = floor_mode == FloorMode::series_minimum ? *lo : 0.0;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = mse.size() / 2; i < mse.size(); ++i) {
    const double excess = mse[i] - fit.floor;
    if (!(excess > 0)) continue;
    const double x = std::log(static_cast<double>(i) + 1);
    const double y = std::log(excess);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++fit.points;
  }
  if (fit.points < 2) throw std::invalid_argument("fit_rate: fewer than two points above the floor");
  const double n = static_cast<double>(fit.points);
  const double denom = n * sxx - sx * sx;
  if (denom == 0) throw std::invalid_argument("fit_rate: degenerate abscissa");
  fit.exponent = (n * sxy - sx * sy) / denom;
  fit.regime = fit.exponent < kLinearRateExponent ? RateRegime::linear : RateRegime::sublinear;
  return fit;
}

std::string to_string(RateRegime regime) { return regime == RateRegime::linear ? "linear" : "sublinear"; }

}  // namespace safl
