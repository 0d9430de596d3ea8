#pragma once

// Annealed acceptance of the server model: each coordinate of a device's model
// takes the server value with probability 1 - p and the eps-blend with
// probability p, where p = exp(-t / L) cools over time.

#include <cmath>
#include <stdexcept>
#include <string>

#include "safl/rng.hpp"
#include "safl/types.hpp"

namespace safl {

enum class AnnealClock { rounds, local_steps };
enum class MaskMode { per_coordinate, scalar };

struct AnnealConfig {
  double L = 10.0;
  double epsilon = 0.3;
  AnnealClock clock = AnnealClock::rounds;
  MaskMode mode = MaskMode::per_coordinate;

  void validate() const {
    if (!(L > 0)) throw std::invalid_argument("anneal: L must be > 0");
    if (!(epsilon >= 0 && epsilon <= 1)) throw std::invalid_argument("anneal: epsilon must lie in [0, 1]");
  }
};

inline double selection_probability(double t, double L) {
  if (!(L > 0)) throw std::invalid_argument("selection_probability: L must be > 0");
  if (t < 0) throw std::invalid_argument("selection_probability: t must be >= 0");
  return std::exp(-t / L);
}

// Entries are eps with probability p and 1 otherwise, one draw per coordinate.
template <typename Scalar = double>
Vector<Scalar> sample_mask(Index d, double p, Scalar eps, Rng& rng) {
  if (!(p >= 0 && p <= 1)) throw std::invalid_argument("sample_mask: p must lie in [0, 1]");
  Vector<Scalar> u(d);
  for (Index j = 0; j < d; ++j) u(j) = uniform01(rng) < p ? eps : Scalar(1);
  return u;
}

// Whole-model variant: one draw decides every coordinate.
template <typename Scalar = double>
Vector<Scalar> sample_scalar_mask(Index d, double p, Scalar eps, Rng& rng) {
  if (!(p >= 0 && p <= 1)) throw std::invalid_argument("sample_scalar_mask: p must lie in [0, 1]");
  return Vector<Scalar>::Constant(d, uniform01(rng) < p ? eps : Scalar(1));
}

template <typename Scalar = double>
Vector<Scalar> draw_mask(const AnnealConfig& cfg, Index d, double p, Rng& rng) {
  return cfg.mode == MaskMode::scalar ? sample_scalar_mask<Scalar>(d, p, Scalar(cfg.epsilon), rng)
                                      : sample_mask<Scalar>(d, p, Scalar(cfg.epsilon), rng);
}

// u .* z_bar + (1 - u) .* z_local
template <typename DerivedU, typename DerivedG, typename DerivedL>
auto mix(const Eigen::MatrixBase<DerivedU>& u, const Eigen::MatrixBase<DerivedG>& z_bar,
         const Eigen::MatrixBase<DerivedL>& z_local) {
  using Scalar = typename DerivedU::Scalar;
  if (u.size() != z_bar.size() || u.size() != z_local.size())
    throw DimensionMismatch("mix: mask, global and local vectors must have equal length");
  return Vector<Scalar>(u.cwiseProduct(z_bar) + (Scalar(1) - u.array()).matrix().cwiseProduct(z_local));
}

}  // namespace safl
