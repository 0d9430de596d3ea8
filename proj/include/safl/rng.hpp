#pragma once

#include <cstdint>
#include <random>

namespace safl {

using Rng = std::mt19937_64;

// Independent purposes draw from independent streams so that, e.g., sampling a
// mixing mask never shifts the SGD sample order of the same device.
enum class Stream : std::uint64_t {
  partition = 1,
  init = 2,
  sgd = 3,
  mask = 4,
  gate = 5,
  selection = 6,
  data = 7,
};

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline Rng make_stream(std::uint64_t seed, Stream purpose, std::uint64_t id = 0) {
  std::uint64_t h = splitmix64(seed);
  h = splitmix64(h ^ static_cast<std::uint64_t>(purpose));
  h = splitmix64(h ^ id);
  std::seed_seq seq{static_cast<std::uint32_t>(h), static_cast<std::uint32_t>(h >> 32)};
  return Rng(seq);
}

// Uniform draw in [0, 1).
inline double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace safl
