#include "rdf/ns_solver.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

#include "advection.hpp"
#include "lawson.hpp"

namespace rdf {

// ---------------------------------------------------------------------------
// Reynolds

Reynolds Reynolds::finite(double value) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw std::invalid_argument("Reynolds number must be positive and finite; use infinite()");
  }
  return Reynolds(value);
}

Reynolds Reynolds::parse(const std::string& text) {
  std::string lower(text);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "inf" || lower == "infinite" || lower == "infinity") return infinite();
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("cannot parse Reynolds number '" + text + "'");
  }
  if (used != text.size()) throw std::invalid_argument("cannot parse Reynolds number '" + text + "'");
  if (std::isinf(v) && v > 0) return infinite();
  return finite(v);
}

double Reynolds::value() const {
  if (is_infinite()) throw std::logic_error("Reynolds number is infinite");
  return value_;
}

std::string Reynolds::to_string() const {
  if (is_infinite()) return "inf";
  std::ostringstream os;
  os.precision(17);
  os << value_;
  return os.str();
}

// ---------------------------------------------------------------------------
// Config

int SolverConfig::grid_size() const {
  return dealias ? dealiased_grid_size(truncation) : minimum_grid_size(truncation);
}

void SolverConfig::validate() const {
  if (truncation < 1) throw std::invalid_argument("truncation must be >= 1");
  if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("dt must be positive");
  if (!(t_end >= 0.0) || !std::isfinite(t_end)) throw std::invalid_argument("T_end must be >= 0");
  if (checkpoint_interval < 0) throw std::invalid_argument("checkpoint_interval must be >= 0");
}

std::int64_t step_count_for(double t_end, double dt) {
  const double ratio = t_end / dt;
  const auto steps = static_cast<std::int64_t>(std::llround(ratio));
  if (std::abs(ratio - static_cast<double>(steps)) > 1e-9 * std::max(1.0, ratio)) {
    throw std::invalid_argument("T_end must be an integer multiple of dt");
  }
  return steps;
}

// ---------------------------------------------------------------------------
// Solver

struct VorticitySolver::Impl {
  Impl(const SolverConfig& c)
      : workspace(c.truncation, c.grid_size()),
        grids(workspace.make_grids()),
        factor(c.truncation, c.re.viscosity(), c.dt),
        rk(c.truncation) {}

  detail::AdvectionWorkspace workspace;
  detail::AdvectionGrids grids;
  detail::IntegratingFactor factor;
  detail::LawsonRk4<1> rk;
};

VorticitySolver::VorticitySolver(const SolverConfig& config)
    : config_((config.validate(), config)), impl_(std::make_unique<Impl>(config)) {}

VorticitySolver::~VorticitySolver() = default;
VorticitySolver::VorticitySolver(VorticitySolver&&) noexcept = default;
VorticitySolver& VorticitySolver::operator=(VorticitySolver&&) noexcept = default;

SpectralField VorticitySolver::advection_tendency(const SpectralField& omega) {
  SpectralField out = SpectralField::scalar(config_.truncation);
  impl_->workspace.load_vorticity(omega, config_.mean_flow, impl_->grids);
  impl_->workspace.vorticity_tendency(impl_->grids, out);
  return out;
}

SpectralField VorticitySolver::tendency(const SpectralField& omega) {
  SpectralField out = advection_tendency(omega);
  const double nu = config_.re.viscosity();
  auto o = out.component(0);
  const auto w = omega.component(0);
  for (std::size_t i = 0; i < o.size(); ++i) {
    o[i] -= nu * static_cast<double>(omega.wave_vector(i).norm_sq()) * w[i];
  }
  return out;
}

SimulationState VorticitySolver::step(const SimulationState& state) {
  if (state.omega.truncation() != config_.truncation) {
    throw std::invalid_argument("state truncation does not match solver configuration");
  }
  std::array<SpectralField, 1> y{state.omega};
  bool first = true;
  impl_->rk.step(y, config_.dt, impl_->factor, [&](const auto& in, auto& out) {
    impl_->workspace.load_vorticity(in[0], config_.mean_flow, impl_->grids);
    if (first) {
      double vmax = 0.0;
      const std::size_t n = impl_->grids.u1.size();
      for (std::size_t i = 0; i < n; ++i) {
        vmax = std::max(vmax, std::hypot(impl_->grids.u1[i], impl_->grids.u2[i]));
      }
      last_max_speed_ = vmax;
      first = false;
    }
    impl_->workspace.vorticity_tendency(impl_->grids, out[0]);
  });
  SimulationState next{state.t + config_.dt, std::move(y[0]), state.step_count + 1};
  if (!next.omega.all_finite()) {
    std::ostringstream os;
    os << "non-finite vorticity coefficients at t=" << next.t << " (step " << next.step_count
       << "): blowup or numerical instability";
    throw NumericalFailure(os.str(), next.t, next.step_count);
  }
  return next;
}

SimulationState step(const SimulationState& state, const SolverConfig& config) {
  VorticitySolver solver(config);
  return solver.step(state);
}

Trajectory run(const SolverConfig& config, const SpectralField& omega0) {
  config.validate();
  if (omega0.kind() != SpectralField::Kind::Scalar || omega0.truncation() != config.truncation) {
    throw std::invalid_argument("initial vorticity does not match solver configuration");
  }
  const std::int64_t steps = step_count_for(config.t_end, config.dt);
  Trajectory traj{config, {}, {}};
  SimulationState state{0.0, omega0, 0};
  traj.checkpoints.push_back(state);
  if (steps == 0) return traj;

  VorticitySolver solver(config);
  constexpr double kCflSafety = 2.0;
  bool warned = false;
  for (std::int64_t s = 1; s <= steps; ++s) {
    state = solver.step(state);
    state.t = static_cast<double>(s) * config.dt;
    const double cfl = config.dt * solver.last_max_speed() * config.truncation;
    if (!warned && cfl > kCflSafety) {
      std::ostringstream os;
      os << "CFL estimate dt*max|u|*K = " << cfl << " exceeds " << kCflSafety << " at t="
         << state.t;
      traj.warnings.push_back(os.str());
      warned = true;
    }
    const bool keep = s == steps ||
                      (config.checkpoint_interval > 0 && s % config.checkpoint_interval == 0);
    if (keep) traj.checkpoints.push_back(state);
  }
  return traj;
}

// ---------------------------------------------------------------------------
// Diagnostics

Diagnostics diagnostics(const SimulationState& state, Vec2 mean_flow) {
  const SpectralField& omega = state.omega;
  const SpectralField u = velocity_from_vorticity(omega, mean_flow);
  Diagnostics d;
  d.energy = 0.5 * sobolev_norm_sq(u, 0);
  d.enstrophy = 0.5 * sobolev_norm_sq(omega, 0);
  double pal = 0.0;
  const auto w = omega.component(0);
  for (std::size_t i = 0; i < w.size(); ++i) {
    pal += static_cast<double>(omega.wave_vector(i).norm_sq()) * std::norm(w[i]);
  }
  d.palinstrophy = 0.5 * kBoxMeasure * pal;
  for (int n = 0; n <= 4; ++n) d.sobolev.push_back(sobolev_norm(u, n));
  return d;
}

SpectralField velocity_form_tendency(const SpectralField& velocity, const Reynolds& re) {
  SpectralField out = leray_project(advective_term(velocity));
  out *= -1.0;
  const double nu = re.viscosity();
  for (int c = 0; c < kDim; ++c) {
    auto o = out.component(c);
    const auto u = velocity.component(c);
    for (std::size_t i = 0; i < o.size(); ++i) {
      o[i] -= nu * static_cast<double>(velocity.wave_vector(i).norm_sq()) * u[i];
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Checkpoint I/O

namespace {

constexpr std::uint32_t kCheckpointVersion = 1;

void put_u32(std::vector<unsigned char>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<unsigned char>(v >> (8 * i)));
}

void put_f64(std::vector<unsigned char>& out, double v) {
  const auto bits = std::bit_cast<std::uint64_t>(v);
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<unsigned char>(bits >> (8 * i)));
}

class Reader {
 public:
  explicit Reader(const std::vector<unsigned char>& bytes) : bytes_(bytes) {}
  void need(std::size_t n) const {
    if (pos_ + n > bytes_.size()) throw std::runtime_error("checkpoint truncated");
  }
  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(bytes_[pos_++]) << (8 * i);
    return v;
  }
  double f64() {
    need(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(bytes_[pos_++]) << (8 * i);
    return std::bit_cast<double>(v);
  }
  bool done() const { return pos_ == bytes_.size(); }
  std::size_t pos_ = 0;

 private:
  const std::vector<unsigned char>& bytes_;
};

}  // namespace

std::vector<unsigned char> encode_checkpoint(const Checkpoint& cp) {
  if (cp.omega.kind() != SpectralField::Kind::Scalar) {
    throw std::invalid_argument("checkpoint vorticity must be a scalar field");
  }
  std::vector<unsigned char> out{'R', 'D', 'F', '1'};
  put_u32(out, kCheckpointVersion);
  put_u32(out, static_cast<std::uint32_t>(cp.omega.truncation()));
  put_f64(out, cp.re.encoded());
  put_f64(out, cp.t);
  for (const Complex& c : cp.omega.coefficients()) {
    put_f64(out, c.real());
    put_f64(out, c.imag());
  }
  return out;
}

Checkpoint decode_checkpoint(const std::vector<unsigned char>& bytes) {
  if (bytes.size() < 4 || std::memcmp(bytes.data(), "RDF1", 4) != 0) {
    throw std::runtime_error("not an RDF1 checkpoint (bad magic)");
  }
  Reader r(bytes);
  r.pos_ = 4;
  const std::uint32_t version = r.u32();
  if (version != kCheckpointVersion) {
    throw std::runtime_error("unsupported checkpoint version " + std::to_string(version));
  }
  const std::uint32_t K = r.u32();
  if (K > 1u << 14) throw std::runtime_error("checkpoint truncation out of range");
  Checkpoint cp;
  cp.re = Reynolds::decode(r.f64());
  cp.t = r.f64();
  cp.omega = SpectralField::scalar(static_cast<int>(K));
  r.need(cp.omega.modes_per_component() * 16);
  for (Complex& c : cp.omega.coefficients()) {
    const double re = r.f64();
    const double im = r.f64();
    c = Complex(re, im);
  }
  if (!r.done()) throw std::runtime_error("trailing bytes after checkpoint payload");
  return cp;
}

void write_checkpoint(const std::filesystem::path& path, const Checkpoint& cp) {
  const auto bytes = encode_checkpoint(cp);
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
  os.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!os) throw std::runtime_error("failed writing " + path.string());
}

Checkpoint read_checkpoint(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open checkpoint " + path.string());
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(is)),
                                   std::istreambuf_iterator<char>());
  return decode_checkpoint(bytes);
}

}  // namespace rdf
