#pragma once

// Growth-law fits for amplification curves, the sub-exponential envelope
//
//     Λ(t) <= exp(σ √Re √t + σ₁ t),
//
// and Reynolds-number sweeps of the amplification at a fixed probe time.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rdf/ns_solver.hpp"
#include "rdf/tangent_solver.hpp"

namespace rdf {

using Sample = std::pair<double, double>;

enum class GrowthModel {
  SqrtExp,  ///< Λ = A e^{σ√t}; params {A, σ}
  Exp,      ///< Λ = A e^{λt};  params {A, λ}
  Power,    ///< y = C x^p;     params {C, p}
};

std::string to_string(GrowthModel model);
GrowthModel parse_growth_model(const std::string& name);

struct FitResult {
  GrowthModel model = GrowthModel::SqrtExp;
  std::vector<double> params;
  double residual = 0.0;  ///< sum of squared log-domain residuals
  std::size_t samples = 0;
  /// Standard error of the rate parameter (σ, λ or p); NaN with 2 samples.
  double rate_stderr = 0.0;

  double rate() const { return params.at(1); }
  double predict(double t) const;
};

struct FitOptions {
  /// Keep t = 0 samples in the √t and exponential fits (they pin ln Λ(0)).
  bool include_origin = false;
};

FitResult fit_sqrt_exponential(const std::vector<Sample>& samples, FitOptions options = {});
FitResult fit_exponential(const std::vector<Sample>& samples, FitOptions options = {});
/// Log-log fit; all x and y must be positive.
FitResult fit_power(const std::vector<Sample>& samples);
FitResult fit_model(GrowthModel model, const std::vector<Sample>& samples, FitOptions options = {});

/// Both time-growth fits, best (smallest residual) first. Ties go to √t.
std::pair<FitResult, FitResult> compare_models(const std::vector<Sample>& samples,
                                               FitOptions options = {});

// ---------------------------------------------------------------------------
// Envelope

struct EnvelopeParams {
  double c = 1.0;
  double max_base_norm = 1.0;  ///< max over the window of ‖u(τ)‖_n
  Reynolds re = Reynolds::finite(100.0);

  double sigma() const;   ///< 8c/√(2e) · max_base_norm
  double sigma1() const;  ///< (√(2e)/2) σ
  void validate() const;
};

struct EnvelopeRow {
  double t = 0.0;
  double log_lambda = 0.0;
  double log_bound = 0.0;  ///< σ√Re√t + σ₁t
  double margin = 0.0;     ///< log_bound - log_lambda
};

std::vector<EnvelopeRow> envelope_check(const std::vector<Sample>& samples, const EnvelopeParams& env);
std::vector<EnvelopeRow> envelope_check(const GrowthRecord& record, int norm_index,
                                        const EnvelopeParams& env);
bool envelope_holds(const std::vector<EnvelopeRow>& rows);

struct EnvelopeCalibration {
  double c = 0.0;          ///< smallest admissible c to within the tolerance
  int iterations = 0;
  double closed_form = 0.0;  ///< max_t ln Λ / (∂ log_bound/∂c), for cross-checking
};

/// Bisection on c. Returns nullopt when no finite c works, which happens
/// only if some t = 0 sample has Λ > 1.
std::optional<EnvelopeCalibration> calibrate_envelope(const std::vector<Sample>& samples,
                                                      double max_base_norm, const Reynolds& re,
                                                      double rel_tol = 1e-10);

// ---------------------------------------------------------------------------
// Turbulent-base experiments

enum class PerturbationSpectrum {
  Smooth,  ///< |dω_k| ∝ |k| e^{-(|k|/k_peak)²}
  White,   ///< flat velocity spectrum up to the cutoff
};

std::string to_string(PerturbationSpectrum spectrum);
PerturbationSpectrum parse_perturbation_spectrum(const std::string& name);

/// A seeded random base with a seeded random perturbation. The base is a
/// smooth random vorticity scaled to the requested rms speed; it is inserted
/// at t = 0 and the tangent run lasts probe_fraction · T₀.
struct GrowthRecipe {
  int truncation = 64;
  Reynolds re = Reynolds::finite(1000.0);
  double dt = 2e-3;
  std::uint64_t seed = 1;
  double base_k_peak = 4.0;
  double base_u_rms = 1.0;
  PerturbationSpectrum perturbation = PerturbationSpectrum::Smooth;
  double perturbation_k_peak = 4.0;
  double perturbation_cutoff = 0.0;  ///< 0 means the truncation
  double probe_fraction = 0.3;
  std::optional<double> turnover_override;
  int samples = 20;
  std::vector<int> norms{0, 3};

  void validate() const;
};

SpectralField recipe_base_vorticity(const GrowthRecipe& recipe);
SpectralField recipe_perturbation(const GrowthRecipe& recipe);

/// Box size over rms speed: 2π / sqrt(Σ|u_k|²).
double turnover_time(const SpectralField& omega);

struct GrowthRun {
  GrowthRecord record;  ///< first sample is t = 0 with Λ = 1
  double turnover_time = 0.0;
  double t_probe = 0.0;  ///< probe time rounded onto the step lattice
  /// max over sample times of the base velocity norm, per recipe norm.
  std::vector<double> max_base_norm;
};

GrowthRun run_growth(const GrowthRecipe& recipe);

// ---------------------------------------------------------------------------
// Reynolds sweeps

struct SweepRow {
  double re = 0.0;
  double amplification = 0.0;
  bool failed = false;
  std::string note;
};

struct SweepResult {
  std::vector<SweepRow> rows;  ///< sorted by Re
  FitResult fit;               ///< power law over the surviving rows
  double exponent_ci95 = 0.0;  ///< half-width of the 95% interval on the exponent
  bool monotone = false;       ///< amplification strictly increasing in Re
};

/// Calls `amplification(Re)` for each entry; runs that throw
/// NumericalFailure or return a non-positive value are excluded with a note.
/// At least 3 survivors are required for the fit. With threads > 1 the runs
/// execute concurrently.
SweepResult reynolds_sweep(const std::vector<double>& re_list,
                           const std::function<double(double)>& amplification, int threads = 1);
/// Sweep of Λ_n(t_probe) for one recipe, varying only Re.
SweepResult reynolds_sweep(const GrowthRecipe& recipe, const std::vector<double>& re_list,
                           int norm_index, int threads = 1);

}  // namespace rdf
