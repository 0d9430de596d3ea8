#pragma once

// Closed-form MSE bounds for the mixed local/global iteration and an empirical
// convergence-rate fit to compare simulated runs against them.

#include <string>
#include <vector>

namespace safl {

struct BoundInputs {
  double mu = 0;
  double lambda = 0;
  std::vector<double> sigma_sq;         // per device
  double alpha = 0;                     // alpha, or alpha_0 for decaying rates
  double epsilon = 1;
  double p = 1;                         // annealing probability entering c
  long q_local = 1;                     // largest number of local iterations
  std::vector<double> eta;              // per device, sums to 1
  std::vector<double> initial_sq_dist;  // ||w_0^(k) - w*||^2 per device

  double zeta() const;
  void validate() const;
};

// (1 - alpha mu)^{2t} zeta + (alpha/mu) sum eta_k^2 sigma_k^2 *
//   (1 - (1 - alpha mu)^{2q}) / (1 - e^{-c} (1 - alpha mu)^{2q})
// with c = (1 - p(1 - eps^2)) ((1 - alpha(2 lambda - mu)) / (1 - alpha mu))^2.
// Requires alpha < 1 / (2 lambda - mu).
double theorem1_bound(const BoundInputs& in, double t);
double theorem1_contraction_constant(const BoundInputs& in);

// c = max{2 alpha_0^2 max_k sigma_k^2 / (2 - (2 - mu alpha_0)^2), zeta}.
// Requires (2 - sqrt 2)/mu < alpha_0 < (2 + sqrt 2)/mu.
double corollary1_constant(const BoundInputs& in);
double corollary1_bound(double c, double t);
double corollary1_bound(const BoundInputs& in, double t);

// c = max{alpha_0^2 sum eta_k sigma_k^2 / (mu alpha_0 - 1), sum eta_k ||w_0^(k) - w*||^2}.
// Requires alpha_0 > 1/mu.
double theorem3_constant(const BoundInputs& in);
double theorem3_bound(double c, double t);
double theorem3_bound(const BoundInputs& in, double t);

// alpha * mean(sigma^2) / (n mu): the large-t floor for uniform weights.
double uniform_weight_floor(const BoundInputs& in);

enum class FloorMode { zero, series_minimum };
enum class RateRegime { sublinear, linear };

struct RateFit {
  double exponent = 0;
  double floor = 0;
  RateRegime regime = RateRegime::sublinear;
  std::size_t points = 0;
};

inline constexpr double kLinearRateExponent = -3.0;

// Least-squares slope of log(mse_i - floor) against log(i + 1) over the tail
// half of the series (entries at or below the floor are skipped).
RateFit fit_rate(const std::vector<double>& mse, FloorMode floor_mode);

std::string to_string(RateRegime regime);

}  // namespace safl
