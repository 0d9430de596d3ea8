#pragma once

// Server-side fusion of the received local models.

#include <cmath>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "safl/types.hpp"

namespace safl {

enum class WeightKind { uniform, size_proportional, ida, custom };

struct WeightScheme {
  WeightKind kind = WeightKind::size_proportional;
  std::vector<double> custom;  // indexed by device id
};

template <typename Scalar>
struct Update {
  Index device = 0;
  Vector<Scalar> z;
  Scalar size = 1;  // m_k
};

inline constexpr double kWeightSumTolerance = 1e-12;

template <typename Scalar>
std::vector<Scalar> weights(const WeightScheme& scheme, const std::vector<Update<Scalar>>& updates,
                            const std::optional<Vector<Scalar>>& z_ref = std::nullopt) {
  if (updates.empty()) throw std::invalid_argument("weights: no updates");
  std::vector<Scalar> raw(updates.size(), Scalar(1));
  switch (scheme.kind) {
    case WeightKind::uniform:
      break;
    case WeightKind::size_proportional:
      for (std::size_t i = 0; i < updates.size(); ++i) {
        if (!(updates[i].size > 0)) throw std::invalid_argument("weights: device sizes must be > 0");
        raw[i] = updates[i].size;
      }
      break;
    case WeightKind::custom:
      for (std::size_t i = 0; i < updates.size(); ++i) {
        const auto id = static_cast<std::size_t>(updates[i].device);
        if (id >= scheme.custom.size())
          throw std::invalid_argument("weights: no custom weight for device " + std::to_string(id));
        if (!(scheme.custom[id] >= 0)) throw std::invalid_argument("weights: custom weights must be >= 0");
        raw[i] = static_cast<Scalar>(scheme.custom[id]);
      }
      break;
    case WeightKind::ida: {
      if (!z_ref) throw std::invalid_argument("weights: ida needs a reference model");
      std::vector<Scalar> dist(updates.size());
      std::size_t exact = 0;
      for (std::size_t i = 0; i < updates.size(); ++i) {
        if (updates[i].z.size() != z_ref->size()) throw DimensionMismatch("weights: ida dimension mismatch");
        dist[i] = (updates[i].z - *z_ref).norm();
        if (dist[i] == 0) ++exact;
      }
      // Infinite inverse distance: the exact matches share the whole mass.
      for (std::size_t i = 0; i < updates.size(); ++i)
        raw[i] = exact > 0 ? (dist[i] == 0 ? Scalar(1) : Scalar(0)) : Scalar(1) / dist[i];
      break;
    }
  }
  const Scalar total = std::accumulate(raw.begin(), raw.end(), Scalar(0));
  if (!(total > 0)) throw std::invalid_argument("weights: all weights are zero");
  for (auto& r : raw) r /= total;
  return raw;
}

template <typename Scalar>
Vector<Scalar> aggregate(const std::vector<Update<Scalar>>& updates, const std::vector<Scalar>& eta) {
  if (updates.empty() || updates.size() != eta.size())
    throw std::invalid_argument("aggregate: need one weight per update");
  const Scalar sum = std::accumulate(eta.begin(), eta.end(), Scalar(0));
  if (std::abs(sum - Scalar(1)) > Scalar(kWeightSumTolerance))
    throw std::invalid_argument("aggregate: weights must sum to 1");
  const Index d = updates.front().z.size();
  Vector<Scalar> out = Vector<Scalar>::Zero(d);
  for (std::size_t i = 0; i < updates.size(); ++i) {
    if (updates[i].z.size() != d) throw DimensionMismatch("aggregate: update dimension mismatch");
    if (eta[i] < 0) throw std::invalid_argument("aggregate: negative weight");
    out += eta[i] * updates[i].z;
  }
  return out;
}

}  // namespace safl
