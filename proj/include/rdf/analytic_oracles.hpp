#pragma once

// Closed-form solution families used as ground truth:
//  * the heat semigroup (linearization about the zero solution),
//  * linearized Couette shear u = (x2, 0), inviscid and viscous, with the
//    x2 direction treated on the whole line through a ξ-space representation,
//  * the one-parameter family of exact periodic solutions
//        u1 = Σ n^{-(3+γ)} e^{-n²t/Re} sin(n(x2 - σt)),  u2 = σ,
//    its σ-derivative and the H³ lower bound for that derivative.

#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "rdf/ns_solver.hpp"
#include "rdf/spectral_core.hpp"

namespace rdf {

// ---------------------------------------------------------------------------
// Heat semigroup

/// Multiplies the coefficient at k by e^{-|k|² t/Re}; identity for Re = ∞.
SpectralField heat_semigroup(const SpectralField& du0, double t, const Reynolds& re);

/// (1/√(2e)) √(Re/t) + 1, the smoothing constant in ‖e^{(t/Re)Δ}u‖_n <= C ‖u‖_{n-1}.
double heat_smoothing_constant(double t, double re);

// ---------------------------------------------------------------------------
// Couette shear

/// Sample grid: x1_j = 2πj/n1 (periodic), x2_j = -L + 2Lj/n2.
struct CouetteGrid {
  int n1 = 16;
  int n2 = 256;
  double half_width = 8.0;

  double x1(int j) const { return kTwoPi * j / n1; }
  double x2(int j) const { return -half_width + 2.0 * half_width * j / n2; }
  double h1() const { return kTwoPi / n1; }
  double h2() const { return 2.0 * half_width / n2; }
};

struct SampledField {
  CouetteGrid grid;
  std::vector<double> values;  ///< row-major, x1 index outer

  double& at(int j1, int j2) { return values[static_cast<std::size_t>(j1) * grid.n2 + j2]; }
  double at(int j1, int j2) const { return values[static_cast<std::size_t>(j1) * grid.n2 + j2]; }
};

SampledField sample_field(const std::function<double(double, double)>& f, const CouetteGrid& grid);

/// dω(t, x1, x2) = dω(0, x1 - x2 t, x2) evaluated exactly.
SampledField couette_inviscid_evolve(const std::function<double(double, double)>& domega0, double t,
                                     const CouetteGrid& grid);
/// Same for sampled data: the x1 shift is applied per row as a Fourier phase
/// e^{-i n x2 t}, exact for data band-limited in x1.
SampledField couette_inviscid_evolve(const SampledField& domega0, double t);

/// ∫∫ dω² dx1 dx2 by the trapezoid rule.
double quadrature_l2_norm_sq(const SampledField& field);
/// H^k norm with weight Σ_{j<=k}(ξ1² + ξ2²)^j, evaluated by FFT on the
/// sampled window (treated as one period; data must decay at x2 = ±L).
double sampled_sobolev_norm(const SampledField& field, int k);

/// Streamwise mode n in ξ space: amplitudes dΩ_{nξ} on ξ_i = -Ξ + i h.
struct CouetteModal {
  int n = 0;
  double xi_max = 0.0;
  double h = 0.0;
  std::vector<Complex> amplitudes;

  std::size_t size() const { return amplitudes.size(); }
  double xi(std::size_t i) const { return -xi_max + h * static_cast<double>(i); }
};

/// Samples profile(ξ) on a symmetric grid of `points` nodes spanning [-Ξ, Ξ].
CouetteModal make_couette_modal(int n, const std::function<Complex(double)>& profile, double xi_max,
                                int points);
/// Modes ±n of dω0 = amplitude·cos(n x1 + phase)·e^{-x2²/width²}.
std::vector<CouetteModal> couette_gaussian_modes(int n, double amplitude, double width,
                                                 double xi_max, int points, double phase = 0.0);

/// exp(-(t/Re)[(ξ - nt/2)² + n²(t²/12 + 1)]).
double couette_viscous_factor(int n, double xi, double t, double re);
/// Pointwise multiplication by the viscous factor; identity for Re = ∞.
CouetteModal couette_viscous_evolve(const CouetteModal& modal, double t, const Reynolds& re);

/// max |dΩ_{nξ}| over the two end nodes of the ξ window.
double couette_window_edge(const CouetteModal& modal);

struct CouetteReconstruction {
  SampledField field;
  double max_imaginary = 0.0;
  /// Set when some modal violates the 1e-12 edge-decay bound.
  std::optional<std::string> warning;
};

/// dω(t) = Σ_n e^{inx1} e^{-inx2t} ∫ dΩ_{nξ} e^{iξx2} dξ (trapezoid in ξ).
/// The modal set must be closed under n -> -n with dΩ_{(-n)ξ} = conj(dΩ_{n(-ξ)}).
CouetteReconstruction couette_reconstruct(const std::vector<CouetteModal>& modals, double t,
                                          const CouetteGrid& grid);

/// 4π² Σ_n ∫ |dΩ_{nξ}(0)|² e^{-(2t/Re)[...]} dξ.
double couette_h0_norm_sq(const std::vector<CouetteModal>& initial, double t, const Reynolds& re);
/// Inviscid ‖dω(t)‖²_{H^k} = 4π² Σ_n ∫ |dΩ_{nξ}|² Σ_{j<=k}(n² + (ξ - nt)²)^j dξ.
double couette_inviscid_hk_norm_sq(const std::vector<CouetteModal>& initial, double t, int k);

// ---------------------------------------------------------------------------
// Exact family

struct ExactFamilyParams {
  double gamma = 1.0;
  double sigma = 0.0;
  Reynolds re = Reynolds::finite(100.0);
  int n_trunc = 32;

  void validate() const;
};

/// Band-limited velocity (modes k = (0, ±n), n <= n_trunc) at time t on a
/// truncation-K grid; requires n_trunc <= K. u2 = σ sits in the k = 0 mode.
SpectralField exact_family_velocity(const ExactFamilyParams& p, double t, int K);
/// ω = -∂u1/∂x2 for the same truncation.
SpectralField exact_family_vorticity(const ExactFamilyParams& p, double t, int K);
/// ∂σ u1 = Σ (-t) n^{-(2+γ)} e^{-n²t/Re} cos(n(x2 - σt)), ∂σ u2 = 1.
SpectralField exact_family_dsigma(const ExactFamilyParams& p, double t, int K);

struct FiniteNorm {
  double value = 0.0;
  double remainder_bound = 0.0;  ///< bound on the truncated tail of value²
  long terms = 0;
};
struct Divergent {};
using SeriesNorm = std::variant<FiniteNorm, Divergent>;

/// ‖∂σ F^t‖_{H^3} of the untruncated series under the repo norm convention.
SeriesNorm dsigma_h3_norm(const ExactFamilyParams& p, double t);

/// √2 π + (π/√e) t^γ (√t √Re / (2√2))^{1-γ}; requires t > 0 and finite Re.
double exact_family_lower_bound(double gamma, double t, double re);

}  // namespace rdf
