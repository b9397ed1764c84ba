#pragma once

// Translation-family derivative of the Euler solution operator.
//
// For U(t, x, a) = u(t, x - a t) + a the directional derivative in a_m at
// a = 0 has coefficients (-i k_m t) u_k plus the unit boost e_m, and
//
//     Σ_m ‖∂_{a_m} U‖_n² = d (2π)^d + t² (‖u‖_{n+1}² - ‖u‖_0²).
//
// The right-hand side diverges whenever u lies in H^n but not H^{n+1}; the
// scan below exposes that divergence as growth under increasing truncation.
// The scan evaluates the identity on static coefficient profiles at a fixed
// time: it does not evolve a rough field under the Euler flow.

#include <cstdint>
#include <vector>

#include "rdf/spectral_core.hpp"

namespace rdf {

enum class TailProfile {
  /// |u_k| = (1 + |k|²)^{-s/2}
  Bracket,
  /// |u_k| = (1 + |k|)^{-s}; same Sobolev class, slower approach to the
  /// asymptotic shell sums.
  OnePlusK,
};

/// Divergence-free field with |u_k| = amplitude·profile(|k|) for
/// 0 < |k_i| <= truncation and seeded phases. Lies in H^n exactly when
/// decay > n + d/2; decay = n + 1 + d/2 gives logarithmic H^{n+1} divergence.
struct TailSpectrumSpec {
  double decay = 5.0;
  TailProfile profile = TailProfile::Bracket;
  int truncation = 16;
  double amplitude = 1.0;
  std::uint64_t seed = 1;
};

SpectralField tail_spectrum_field(const TailSpectrumSpec& spec);

/// ∂/∂a_m of u(x - a t) + a at a = 0; `axis` is zero-based.
SpectralField translation_derivative(const SpectralField& velocity, double t, int axis);

/// Closed form d(2π)^d + t²(‖u‖²_{n+1} - ‖u‖²_0).
double translation_derivative_normsq_total(const SpectralField& velocity, int n, double t);

/// Σ_m ‖translation_derivative(u, t, m)‖_n², summed mode by mode.
double translation_derivative_normsq_direct(const SpectralField& velocity, int n, double t);

struct DivergenceScanRow {
  int truncation = 0;
  double norm_total = 0.0;  ///< sqrt of the summed squared derivative norms
  /// (norm² - previous norm²)/(ln K - ln K_prev); NaN on the first row.
  double norm_sq_increment_per_lnK = 0.0;
};

std::vector<DivergenceScanRow> divergence_scan(const TailSpectrumSpec& spec, int n, double t,
                                               const std::vector<int>& truncations);

}  // namespace rdf
