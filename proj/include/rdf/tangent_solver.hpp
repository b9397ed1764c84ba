#pragma once

// Linearized vorticity dynamics along a stored base trajectory,
//
//     dω_t - (1/Re) Δdω = -u·∇dω - du·∇ω,   du = Biot–Savart(dω),
//
// integrated with the same Lawson RK4 scheme as the nonlinear solver. The
// base stages are recomputed from the stored base state at each step, so the
// tangent map is the exact derivative of the discrete nonlinear step and no
// temporal interpolation of the base enters.

#include <array>
#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "rdf/ns_solver.hpp"
#include "rdf/spectral_core.hpp"

namespace rdf {

/// Read-only base trajectory. States between stored checkpoints are
/// regenerated by re-integrating from the preceding checkpoint, which
/// reproduces the original run bit for bit.
class BaseTrajectory {
 public:
  BaseTrajectory(Trajectory trajectory, std::string id);
  /// The zero solution under `config` (no solver work is done for it).
  static BaseTrajectory trivial(const SolverConfig& config);
  /// Stores only the initial state; every later state is regenerated on
  /// demand. Spans [0, config.t_end].
  static BaseTrajectory from_initial(const SolverConfig& config, SpectralField omega0,
                                     std::string id);

  const SolverConfig& config() const { return trajectory_.config; }
  const std::string& id() const { return id_; }
  bool is_trivial() const { return trivial_; }
  double dt() const { return trajectory_.config.dt; }
  std::int64_t last_step() const { return last_step_; }
  double t_end() const { return static_cast<double>(last_step_) * dt(); }
  const Trajectory& trajectory() const { return trajectory_; }

  /// Index s with |t - s·dt| tiny; throws when t is not on the step lattice
  /// or lies outside [0, t_end].
  std::int64_t step_index(double t) const;
  SimulationState state_at_step(std::int64_t step) const;
  SimulationState state_at(double t) const { return state_at_step(step_index(t)); }

 private:
  BaseTrajectory() = default;
  Trajectory trajectory_;
  std::string id_;
  bool trivial_ = false;
  std::int64_t last_step_ = 0;
};

/// Advances (base, perturbation) together one step at a time.
class TangentIntegrator {
 public:
  TangentIntegrator(const BaseTrajectory& base, SpectralField domega0, double t0 = 0.0);
  ~TangentIntegrator();
  TangentIntegrator(TangentIntegrator&&) noexcept;

  void advance();
  double t() const { return static_cast<double>(step_) * base_->dt(); }
  std::int64_t step() const { return step_; }
  const SpectralField& perturbation() const { return bundle_[1]; }
  const SpectralField& base_vorticity() const { return bundle_[0]; }

 private:
  struct Impl;
  const BaseTrajectory* base_;
  std::int64_t step_;
  std::array<SpectralField, 2> bundle_;
  std::unique_ptr<Impl> impl_;
};

/// One tangent step of size dt from time t; dt and Re must match the base.
SpectralField tangent_step(const BaseTrajectory& base, const SpectralField& domega, double t,
                           double dt, const Reynolds& re);

/// ‖du‖_n of the velocity induced by a vorticity perturbation.
double perturbation_norm(const SpectralField& domega, int n);

struct GrowthRecord {
  std::string base_id;
  Reynolds re = Reynolds::infinite();
  std::vector<int> norm_indices;
  std::vector<double> times;
  /// lambda[j][i] = Λ_{norm_indices[j]}(times[i]) = ‖du(t_i)‖_n/‖du(0)‖_n.
  std::vector<std::vector<double>> lambda;

  /// Samples (t, Λ_n) for one norm index.
  std::vector<std::pair<double, double>> series(int norm_index) const;
};

/// Sample times must lie on the base step lattice, in nondecreasing order.
GrowthRecord amplification_curve(const BaseTrajectory& base, const SpectralField& domega0,
                                 const std::vector<int>& norm_indices,
                                 const std::vector<double>& sample_times);

struct RemainderRow {
  double epsilon = 0.0;
  double remainder_norm = 0.0;  ///< ‖δu(t) - ε du(t)‖_n
  double remainder_over_eps = 0.0;
  double remainder_over_eps2 = 0.0;
  bool failed = false;
  std::string note;
};

struct RemainderTable {
  int norm_index = 0;
  double t = 0.0;
  std::vector<RemainderRow> rows;
};

/// For each ε: runs the nonlinear solver from base(0) + ε·direction, takes
/// δω(t) = ω_ε(t) - base(t) and compares its velocity with ε·du(t) from the
/// tangent run. Epsilons must be strictly decreasing. A nonlinear run that
/// fails numerically marks its row failed; the remaining rows still run.
RemainderTable remainder_experiment(const BaseTrajectory& base, const SpectralField& direction,
                                    const std::vector<double>& epsilons, double t, int n);

}  // namespace rdf
