#pragma once

#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <random>

#include "rdf/random_fields.hpp"
#include "rdf/spectral_core.hpp"

namespace rdf::test {

/// Runs `body(seed, rng)` for `count` seeds; the failing seed is reported.
template <class F>
void for_each_seed(int count, F&& body, std::uint64_t first = 1) {
  for (std::uint64_t seed = first; seed < first + static_cast<std::uint64_t>(count); ++seed) {
    CAPTURE(seed);
    std::mt19937_64 rng(seed);
    body(seed, rng);
  }
}

inline double relative_error(double a, double b) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300});
}

/// Smooth random solenoidal velocity with modes up to K.
inline SpectralField smooth_velocity(int K, std::uint64_t seed) {
  return random_solenoidal_velocity(K, seed, [](double k) { return std::exp(-0.3 * k); });
}

/// Smooth random zero-mean vorticity.
inline SpectralField smooth_vorticity(int K, std::uint64_t seed) {
  return random_scalar(K, seed, [](double k) { return std::exp(-0.3 * k); });
}

inline int uniform_int(std::mt19937_64& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

}  // namespace rdf::test
