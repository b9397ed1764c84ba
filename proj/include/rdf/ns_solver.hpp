#pragma once

// Pseudo-spectral 2D Navier–Stokes / Euler solver in vorticity form,
//
//     ω_t - (1/Re) Δω = -u·∇ω,   u = Biot–Savart(ω) + U,
//
// with U an optional constant mean flow. Time stepping is classical RK4 on
// the advection term with the exact viscous integrating factor e^{-|k|²dt/Re}
// (Lawson RK4). Products are evaluated on a zero-padded grid so the retained
// modes |k_i| <= K are alias-free.

#include <cstdint>
#include <filesystem>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "rdf/spectral_core.hpp"

namespace rdf {

/// Reynolds number with an explicit infinite (Euler) value.
class Reynolds {
 public:
  static Reynolds finite(double value);
  static Reynolds infinite() { return Reynolds(); }
  /// Parses a positive number or one of "inf", "infinite", "infinity".
  static Reynolds parse(const std::string& text);
  /// Checkpoint encoding: values <= 0 mean infinite.
  static Reynolds decode(double encoded) { return encoded <= 0.0 ? infinite() : finite(encoded); }

  bool is_infinite() const { return value_ == 0.0; }
  double value() const;
  double viscosity() const { return is_infinite() ? 0.0 : 1.0 / value_; }
  double encoded() const { return value_; }
  std::string to_string() const;

  bool operator==(const Reynolds&) const = default;

 private:
  Reynolds() = default;
  explicit Reynolds(double v) : value_(v) {}
  double value_ = 0.0;
};

struct SolverConfig {
  int truncation = 32;
  Reynolds re = Reynolds::finite(100.0);
  double dt = 1e-3;
  double t_end = 1.0;
  bool dealias = true;
  /// Steps between stored checkpoints; 0 keeps only the first and last state.
  int checkpoint_interval = 1;
  Vec2 mean_flow{0.0, 0.0};

  int grid_size() const;
  void validate() const;
};

struct SimulationState {
  double t = 0.0;
  SpectralField omega;
  std::int64_t step_count = 0;
};

/// Raised when the coefficients stop being finite.
class NumericalFailure : public std::runtime_error {
 public:
  NumericalFailure(const std::string& what, double time, std::int64_t step)
      : std::runtime_error(what), time_(time), step_(step) {}
  double time() const { return time_; }
  std::int64_t step() const { return step_; }

 private:
  double time_;
  std::int64_t step_;
};

/// Owns the FFT workspace and integrating factors for one configuration.
/// Not thread-safe; use one instance per thread.
class VorticitySolver {
 public:
  explicit VorticitySolver(const SolverConfig& config);
  ~VorticitySolver();
  VorticitySolver(VorticitySolver&&) noexcept;
  VorticitySolver& operator=(VorticitySolver&&) noexcept;

  const SolverConfig& config() const { return config_; }

  /// Advances by one time step of config().dt.
  SimulationState step(const SimulationState& state);
  /// -u·∇ω (dealiased, zero mean mode).
  SpectralField advection_tendency(const SpectralField& omega);
  /// Full right-hand side -u·∇ω + (1/Re)Δω.
  SpectralField tendency(const SpectralField& omega);
  /// max |u| on the collocation grid at the last evaluated stage.
  double last_max_speed() const { return last_max_speed_; }

 private:
  struct Impl;
  SolverConfig config_;
  std::unique_ptr<Impl> impl_;
  double last_max_speed_ = 0.0;
};

SimulationState step(const SimulationState& state, const SolverConfig& config);

struct Trajectory {
  SolverConfig config;
  std::vector<SimulationState> checkpoints;
  std::vector<std::string> warnings;
};

/// Integrates from omega0 at t = 0 to config.t_end, which must be an integer
/// multiple of config.dt. Throws NumericalFailure with the failing time.
Trajectory run(const SolverConfig& config, const SpectralField& omega0);

/// Number of steps of size dt covering [0, t_end]; rejects non-multiples.
std::int64_t step_count_for(double t_end, double dt);

struct Diagnostics {
  double energy = 0.0;        ///< ½‖u‖₀²
  double enstrophy = 0.0;     ///< ½‖ω‖₀²
  double palinstrophy = 0.0;  ///< ½‖∇ω‖₀²
  std::vector<double> sobolev;  ///< ‖u‖_n for n = 0..4
};

Diagnostics diagnostics(const SimulationState& state, Vec2 mean_flow = {0.0, 0.0});

/// Velocity-form tendency -P((u·∇)u) + (1/Re)Δu, used to cross-check the
/// vorticity formulation.
SpectralField velocity_form_tendency(const SpectralField& velocity, const Reynolds& re);

// Checkpoint files: "RDF1", u32 version = 1, u32 K, f64 Re (<= 0 is
// infinite), f64 t, then (2K+1)² complex128 vorticity coefficients with k1
// as the outer index. All little-endian.
struct Checkpoint {
  Reynolds re = Reynolds::infinite();
  double t = 0.0;
  SpectralField omega;
};

std::vector<unsigned char> encode_checkpoint(const Checkpoint& checkpoint);
Checkpoint decode_checkpoint(const std::vector<unsigned char>& bytes);
void write_checkpoint(const std::filesystem::path& path, const Checkpoint& checkpoint);
Checkpoint read_checkpoint(const std::filesystem::path& path);

}  // namespace rdf
