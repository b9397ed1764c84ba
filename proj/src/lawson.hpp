#pragma once

// Lawson (integrating-factor) RK4 for bundles of scalar spectral fields that
// share the linear operator -ν|k|². The arithmetic for each bundle member is
// independent of the others, so the base field of a coupled base/tangent
// bundle evolves bit-identically to a stand-alone base run.

#include <array>
#include <cmath>
#include <cstddef>
#include <vector>

#include "rdf/spectral_core.hpp"

namespace rdf::detail {

struct IntegratingFactor {
  std::vector<double> full;  ///< e^{-ν|k|² dt}
  std::vector<double> half;  ///< e^{-ν|k|² dt/2}

  IntegratingFactor(int K, double viscosity, double dt) {
    const SpectralField probe = SpectralField::scalar(K);
    full.resize(probe.modes_per_component());
    half.resize(probe.modes_per_component());
    for (std::size_t i = 0; i < full.size(); ++i) {
      const double q = static_cast<double>(probe.wave_vector(i).norm_sq());
      full[i] = viscosity == 0.0 ? 1.0 : std::exp(-viscosity * q * dt);
      half[i] = viscosity == 0.0 ? 1.0 : std::exp(-0.5 * viscosity * q * dt);
    }
  }
};

template <std::size_t M>
class LawsonRk4 {
 public:
  using Bundle = std::array<SpectralField, M>;

  explicit LawsonRk4(int K) {
    for (auto* b : {&k1_, &k2_, &k3_, &k4_, &stage_}) {
      for (auto& f : *b) f = SpectralField::scalar(K);
    }
  }

  /// rhs(const Bundle& in, Bundle& out) writes the nonlinear tendencies.
  template <typename Rhs>
  void step(Bundle& y, double dt, const IntegratingFactor& factor, Rhs&& rhs) {
    const std::size_t n = factor.full.size();
    rhs(y, k1_);
    for (std::size_t m = 0; m < M; ++m) {
      auto s = stage_[m].component(0);
      const auto y0 = y[m].component(0);
      const auto a = k1_[m].component(0);
      for (std::size_t i = 0; i < n; ++i) s[i] = factor.half[i] * (y0[i] + (0.5 * dt) * a[i]);
    }
    rhs(stage_, k2_);
    for (std::size_t m = 0; m < M; ++m) {
      auto s = stage_[m].component(0);
      const auto y0 = y[m].component(0);
      const auto b = k2_[m].component(0);
      for (std::size_t i = 0; i < n; ++i) s[i] = factor.half[i] * y0[i] + (0.5 * dt) * b[i];
    }
    rhs(stage_, k3_);
    for (std::size_t m = 0; m < M; ++m) {
      auto s = stage_[m].component(0);
      const auto y0 = y[m].component(0);
      const auto c = k3_[m].component(0);
      for (std::size_t i = 0; i < n; ++i) {
        s[i] = factor.full[i] * y0[i] + dt * (factor.half[i] * c[i]);
      }
    }
    rhs(stage_, k4_);
    const double w = dt / 6.0;
    for (std::size_t m = 0; m < M; ++m) {
      auto y0 = y[m].component(0);
      const auto a = k1_[m].component(0);
      const auto b = k2_[m].component(0);
      const auto c = k3_[m].component(0);
      const auto d = k4_[m].component(0);
      for (std::size_t i = 0; i < n; ++i) {
        y0[i] = factor.full[i] * y0[i] +
                w * (factor.full[i] * a[i] + 2.0 * factor.half[i] * (b[i] + c[i]) + d[i]);
      }
    }
  }

 private:
  Bundle k1_, k2_, k3_, k4_, stage_;
};

}  // namespace rdf::detail
