#include "rdf/tangent_solver.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "advection.hpp"
#include "lawson.hpp"

namespace rdf {

// ---------------------------------------------------------------------------
// BaseTrajectory

BaseTrajectory::BaseTrajectory(Trajectory trajectory, std::string id)
    : trajectory_(std::move(trajectory)), id_(std::move(id)) {
  if (trajectory_.checkpoints.empty()) throw std::invalid_argument("base trajectory is empty");
  trajectory_.config.validate();
  if (trajectory_.checkpoints.front().step_count != 0) {
    throw std::invalid_argument("base trajectory must start at step 0");
  }
  last_step_ = trajectory_.checkpoints.back().step_count;
}

BaseTrajectory BaseTrajectory::trivial(const SolverConfig& config) {
  config.validate();
  BaseTrajectory base;
  base.trajectory_.config = config;
  base.trajectory_.checkpoints.push_back({0.0, SpectralField::scalar(config.truncation), 0});
  base.id_ = "trivial";
  base.trivial_ = true;
  base.last_step_ = step_count_for(config.t_end, config.dt);
  return base;
}

BaseTrajectory BaseTrajectory::from_initial(const SolverConfig& config, SpectralField omega0,
                                           std::string id) {
  config.validate();
  if (omega0.kind() != SpectralField::Kind::Scalar || omega0.truncation() != config.truncation) {
    throw std::invalid_argument("initial vorticity does not match the configuration");
  }
  BaseTrajectory base;
  base.trajectory_.config = config;
  base.trajectory_.checkpoints.push_back({0.0, std::move(omega0), 0});
  base.id_ = std::move(id);
  base.last_step_ = step_count_for(config.t_end, config.dt);
  return base;
}

std::int64_t BaseTrajectory::step_index(double t) const {
  const double ratio = t / dt();
  const auto s = static_cast<std::int64_t>(std::llround(ratio));
  if (std::abs(ratio - static_cast<double>(s)) > 1e-8 * std::max(1.0, std::abs(ratio))) {
    throw std::invalid_argument("time " + std::to_string(t) + " is not on the base step lattice");
  }
  if (s < 0 || s > last_step_) {
    throw std::out_of_range("time " + std::to_string(t) + " outside stored base trajectory [0, " +
                            std::to_string(t_end()) + "]");
  }
  return s;
}

SimulationState BaseTrajectory::state_at_step(std::int64_t step) const {
  if (step < 0 || step > last_step_) throw std::out_of_range("base step outside trajectory");
  if (trivial_) {
    return {static_cast<double>(step) * dt(), SpectralField::scalar(config().truncation), step};
  }
  const auto& cps = trajectory_.checkpoints;
  std::size_t best = 0;
  for (std::size_t i = 0; i < cps.size(); ++i) {
    if (cps[i].step_count <= step) best = i;
  }
  SimulationState state = cps[best];
  if (state.step_count == step) return state;
  VorticitySolver solver(config());
  while (state.step_count < step) {
    state = solver.step(state);
    state.t = static_cast<double>(state.step_count) * dt();
  }
  return state;
}

// ---------------------------------------------------------------------------
// TangentIntegrator

struct TangentIntegrator::Impl {
  Impl(const SolverConfig& c, bool trivial_base)
      : trivial(trivial_base && c.mean_flow[0] == 0.0 && c.mean_flow[1] == 0.0),
        mean_flow(c.mean_flow),
        workspace(c.truncation, c.grid_size()),
        base_grids(workspace.make_grids()),
        pert_grids(workspace.make_grids()),
        factor(c.truncation, c.re.viscosity(), c.dt),
        rk(c.truncation) {}

  bool trivial;
  Vec2 mean_flow;
  detail::AdvectionWorkspace workspace;
  detail::AdvectionGrids base_grids, pert_grids;
  detail::IntegratingFactor factor;
  detail::LawsonRk4<2> rk;
};

TangentIntegrator::TangentIntegrator(const BaseTrajectory& base, SpectralField domega0, double t0)
    : base_(&base), step_(base.step_index(t0)) {
  const auto& c = base.config();
  if (domega0.kind() != SpectralField::Kind::Scalar || domega0.truncation() != c.truncation) {
    throw std::invalid_argument("perturbation does not match base truncation");
  }
  bundle_[0] = base.state_at_step(step_).omega;
  bundle_[1] = std::move(domega0);
  impl_ = std::make_unique<Impl>(c, base.is_trivial());
}

TangentIntegrator::~TangentIntegrator() = default;
TangentIntegrator::TangentIntegrator(TangentIntegrator&&) noexcept = default;

void TangentIntegrator::advance() {
  if (step_ >= base_->last_step()) {
    throw std::out_of_range("tangent integration past the end of the base trajectory");
  }
  auto& im = *impl_;
  if (im.trivial) {
    // Base is identically zero: the tangent equation is the heat equation.
    auto d = bundle_[1].component(0);
    for (std::size_t i = 0; i < d.size(); ++i) d[i] *= im.factor.full[i];
  } else {
    im.rk.step(bundle_, base_->dt(), im.factor, [&](const auto& in, auto& out) {
      im.workspace.load_vorticity(in[0], im.mean_flow, im.base_grids);
      im.workspace.vorticity_tendency(im.base_grids, out[0]);
      im.workspace.load_vorticity(in[1], {0.0, 0.0}, im.pert_grids);
      im.workspace.tangent_tendency(im.base_grids, im.pert_grids, out[1]);
    });
  }
  ++step_;
  if (!bundle_[1].all_finite() || !bundle_[0].all_finite()) {
    throw NumericalFailure("non-finite tangent coefficients", t(), step_);
  }
}

SpectralField tangent_step(const BaseTrajectory& base, const SpectralField& domega, double t,
                           double dt, const Reynolds& re) {
  if (std::abs(dt - base.dt()) > 1e-12 * base.dt()) {
    throw std::invalid_argument("tangent_step: dt must equal the base trajectory step");
  }
  if (!(re == base.config().re)) {
    throw std::invalid_argument("tangent_step: Reynolds number differs from the base");
  }
  TangentIntegrator integ(base, domega, t);
  integ.advance();
  return integ.perturbation();
}

double perturbation_norm(const SpectralField& domega, int n) {
  if (n < 0) throw std::invalid_argument("Sobolev index must be nonnegative");
  // |du_k|² = |dω_k|²/|k|²; the perturbation carries no mean flow.
  double sum = 0.0;
  const auto w = domega.component(0);
  for (std::size_t i = 0; i < w.size(); ++i) {
    const long q = domega.wave_vector(i).norm_sq();
    if (q == 0) continue;
    sum += sobolev_weight(q, n) * std::norm(w[i]) / static_cast<double>(q);
  }
  return std::sqrt(kBoxMeasure * sum);
}

// ---------------------------------------------------------------------------
// Growth records

std::vector<std::pair<double, double>> GrowthRecord::series(int norm_index) const {
  for (std::size_t j = 0; j < norm_indices.size(); ++j) {
    if (norm_indices[j] != norm_index) continue;
    std::vector<std::pair<double, double>> out;
    for (std::size_t i = 0; i < times.size(); ++i) out.emplace_back(times[i], lambda[j][i]);
    return out;
  }
  throw std::invalid_argument("norm index not recorded");
}

GrowthRecord amplification_curve(const BaseTrajectory& base, const SpectralField& domega0,
                                 const std::vector<int>& norm_indices,
                                 const std::vector<double>& sample_times) {
  if (norm_indices.empty()) throw std::invalid_argument("no norm indices requested");
  std::vector<double> initial;
  for (int n : norm_indices) {
    const double v = perturbation_norm(domega0, n);
    if (!(v > 0.0)) {
      throw std::invalid_argument("amplification_curve: zero initial perturbation");
    }
    initial.push_back(v);
  }
  std::vector<std::int64_t> steps;
  for (double t : sample_times) {
    steps.push_back(base.step_index(t));
    if (steps.size() > 1 && steps.back() < steps[steps.size() - 2]) {
      throw std::invalid_argument("sample times must be nondecreasing");
    }
  }
  GrowthRecord rec;
  rec.base_id = base.id();
  rec.re = base.config().re;
  rec.norm_indices = norm_indices;
  rec.lambda.assign(norm_indices.size(), {});
  TangentIntegrator integ(base, domega0, 0.0);
  for (std::size_t i = 0; i < steps.size(); ++i) {
    while (integ.step() < steps[i]) integ.advance();
    rec.times.push_back(static_cast<double>(steps[i]) * base.dt());
    for (std::size_t j = 0; j < norm_indices.size(); ++j) {
      rec.lambda[j].push_back(perturbation_norm(integ.perturbation(), norm_indices[j]) / initial[j]);
    }
  }
  return rec;
}

// ---------------------------------------------------------------------------
// Remainder experiment

RemainderTable remainder_experiment(const BaseTrajectory& base, const SpectralField& direction,
                                    const std::vector<double>& epsilons, double t, int n) {
  for (std::size_t i = 0; i < epsilons.size(); ++i) {
    if (!(epsilons[i] > 0.0) || (i > 0 && epsilons[i] >= epsilons[i - 1])) {
      throw std::invalid_argument("epsilons must be positive and strictly decreasing");
    }
  }
  const std::int64_t target = base.step_index(t);
  RemainderTable table;
  table.norm_index = n;
  table.t = static_cast<double>(target) * base.dt();

  TangentIntegrator tangent(base, direction, 0.0);
  while (tangent.step() < target) tangent.advance();
  const SpectralField du = tangent.perturbation();
  const SimulationState base_end = base.state_at_step(target);
  const SimulationState base_start = base.state_at_step(0);

  const SolverConfig& cfg = base.config();
  VorticitySolver solver(cfg);
  for (double eps : epsilons) {
    RemainderRow row;
    row.epsilon = eps;
    try {
      SimulationState s{0.0, base_start.omega, 0};
      s.omega.axpy(eps, direction);
      while (s.step_count < target) s = solver.step(s);
      SpectralField diff = s.omega;
      diff -= base_end.omega;
      diff.axpy(-eps, du);
      row.remainder_norm = perturbation_norm(diff, n);
      row.remainder_over_eps = row.remainder_norm / eps;
      row.remainder_over_eps2 = row.remainder_norm / (eps * eps);
    } catch (const NumericalFailure& e) {
      row.failed = true;
      row.note = e.what();
      row.remainder_norm = row.remainder_over_eps = row.remainder_over_eps2 =
          std::numeric_limits<double>::quiet_NaN();
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

}  // namespace rdf
