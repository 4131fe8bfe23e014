#pragma once

#include <cstdint>
#include <vector>

#include "qmax/distributions.hpp"
#include "qmax/random.hpp"

namespace qmax::testing {

// Inverse-transform GEV samples from a seeded counter stream.
inline std::vector<double> gev_samples(std::uint64_t seed, std::size_t n, GevParams params) {
  CounterStream rng(seed);
  std::vector<double> out(n);
  for (double& v : out) v = gev_quantile(rng.next_uniform(), params);
  return out;
}

inline std::vector<double> uniform_samples(std::uint64_t seed, std::size_t n, double lo = 0.0,
                                           double hi = 1.0) {
  CounterStream rng(seed);
  std::vector<double> out(n);
  for (double& v : out) v = lo + (hi - lo) * rng.next_uniform();
  return out;
}

inline std::vector<double> normal_samples(std::uint64_t seed, std::size_t n, double mean = 0.0,
                                          double sd = 1.0) {
  CounterStream rng(seed);
  std::vector<double> out(n);
  for (double& v : out) v = mean + sd * rng.next_normal();
  return out;
}

}  // namespace qmax::testing
