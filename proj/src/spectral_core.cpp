#include "rdf/spectral_core.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "advection.hpp"
#include "fft.hpp"

namespace rdf {

namespace {

constexpr Complex kI(0.0, 1.0);

void require_vector(const SpectralField& f, const char* what) {
  if (f.kind() != SpectralField::Kind::Vector) {
    throw std::invalid_argument(std::string(what) + ": expected a vector field");
  }
}

void require_scalar(const SpectralField& f, const char* what) {
  if (f.kind() != SpectralField::Kind::Scalar) {
    throw std::invalid_argument(std::string(what) + ": expected a scalar field");
  }
}

bool is_smooth_size(int n) {
  for (int p : {2, 3, 5, 7}) {
    while (n % p == 0) n /= p;
  }
  return n == 1;
}

}  // namespace

SpectralField::SpectralField(int truncation, Kind kind) : K_(truncation), kind_(kind) {
  if (truncation < 0) throw std::invalid_argument("truncation must be nonnegative");
  data_.assign(static_cast<std::size_t>(components()) * modes_per_component(), Complex{});
}

void SpectralField::symmetrize() {
  for (int c = 0; c < components(); ++c) {
    auto coeffs = component(c);
    for (int k1 = -K_; k1 <= K_; ++k1) {
      for (int k2 = -K_; k2 <= K_; ++k2) {
        const bool upper = k2 > 0 || (k2 == 0 && k1 > 0);
        if (upper) coeffs[index({-k1, -k2})] = std::conj(coeffs[index({k1, k2})]);
      }
    }
    auto& zero = coeffs[index({0, 0})];
    zero = Complex(zero.real(), 0.0);
  }
}

double SpectralField::reality_defect() const {
  double worst = 0.0;
  for (int c = 0; c < components(); ++c) {
    const auto coeffs = component(c);
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
      const WaveVector k = wave_vector(i);
      worst = std::max(worst, std::abs(coeffs[index(-k)] - std::conj(coeffs[i])));
    }
  }
  return worst;
}

double SpectralField::divergence_defect() const {
  if (kind_ != Kind::Vector) return 0.0;
  double worst = 0.0;
  const auto u1 = component(0);
  const auto u2 = component(1);
  for (std::size_t i = 0; i < u1.size(); ++i) {
    const WaveVector k = wave_vector(i);
    worst = std::max(worst, std::abs(static_cast<double>(k.k1) * u1[i] +
                                     static_cast<double>(k.k2) * u2[i]));
  }
  return worst;
}

double SpectralField::max_abs() const {
  double worst = 0.0;
  for (const auto& c : data_) worst = std::max(worst, std::abs(c));
  return worst;
}

bool SpectralField::all_finite() const {
  return std::all_of(data_.begin(), data_.end(), [](const Complex& c) {
    return std::isfinite(c.real()) && std::isfinite(c.imag());
  });
}

void SpectralField::require_compatible(const SpectralField& other) const {
  if (other.K_ != K_ || other.kind_ != kind_) {
    throw std::invalid_argument("spectral fields have different shape");
  }
}

SpectralField& SpectralField::operator+=(const SpectralField& other) {
  require_compatible(other);
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
  solenoidal_ = solenoidal_ && other.solenoidal_;
  return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& other) {
  require_compatible(other);
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
  solenoidal_ = solenoidal_ && other.solenoidal_;
  return *this;
}

SpectralField& SpectralField::operator*=(double s) {
  for (auto& c : data_) c *= s;
  return *this;
}

void SpectralField::axpy(double s, const SpectralField& other) {
  require_compatible(other);
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += s * other.data_[i];
  solenoidal_ = solenoidal_ && other.solenoidal_;
}

SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
SpectralField operator*(double s, SpectralField a) { return a *= s; }

double max_abs_difference(const SpectralField& a, const SpectralField& b) {
  if (a.truncation() != b.truncation() || a.kind() != b.kind()) {
    throw std::invalid_argument("spectral fields have different shape");
  }
  const auto ca = a.coefficients();
  const auto cb = b.coefficients();
  double worst = 0.0;
  for (std::size_t i = 0; i < ca.size(); ++i) worst = std::max(worst, std::abs(ca[i] - cb[i]));
  return worst;
}

double sobolev_weight(long k_norm_sq, int n) {
  const double q = static_cast<double>(k_norm_sq);
  double term = 1.0;
  double sum = 1.0;
  for (int j = 1; j <= n; ++j) {
    term *= q;
    sum += term;
  }
  return sum;
}

double sobolev_norm_sq(const SpectralField& field, int n) {
  if (n < 0) throw std::invalid_argument("Sobolev index must be nonnegative");
  double sum = 0.0;
  for (std::size_t i = 0; i < field.modes_per_component(); ++i) {
    double energy = 0.0;
    for (int c = 0; c < field.components(); ++c) energy += std::norm(field.component(c)[i]);
    if (energy != 0.0) sum += sobolev_weight(field.wave_vector(i).norm_sq(), n) * energy;
  }
  return kBoxMeasure * sum;
}

double sobolev_norm(const SpectralField& field, int n) { return std::sqrt(sobolev_norm_sq(field, n)); }

double l2_inner(const SpectralField& a, const SpectralField& b) {
  if (a.truncation() != b.truncation() || a.kind() != b.kind()) {
    throw std::invalid_argument("spectral fields have different shape");
  }
  const auto ca = a.coefficients();
  const auto cb = b.coefficients();
  double sum = 0.0;
  for (std::size_t i = 0; i < ca.size(); ++i) sum += (std::conj(ca[i]) * cb[i]).real();
  return kBoxMeasure * sum;
}

SpectralField velocity_from_vorticity(const SpectralField& omega, Vec2 mean_flow) {
  require_scalar(omega, "velocity_from_vorticity");
  const Complex mean = omega(WaveVector{0, 0});
  if (std::abs(mean) > 1e-12 * std::max(1.0, omega.max_abs())) {
    throw std::invalid_argument(
        "velocity_from_vorticity: nonzero mean vorticity cannot be inverted on the torus");
  }
  const int K = omega.truncation();
  SpectralField u = SpectralField::vector(K);
  const auto w = omega.component(0);
  auto u1 = u.component(0);
  auto u2 = u.component(1);
  for (std::size_t i = 0; i < w.size(); ++i) {
    const WaveVector k = omega.wave_vector(i);
    const long q = k.norm_sq();
    if (q == 0) continue;
    const Complex psi = w[i] / static_cast<double>(q);
    u1[i] = kI * static_cast<double>(k.k2) * psi;
    u2[i] = -kI * static_cast<double>(k.k1) * psi;
  }
  u.at(0, {0, 0}) = mean_flow[0];
  u.at(1, {0, 0}) = mean_flow[1];
  u.set_solenoidal(true);
  return u;
}

SpectralField vorticity_of(const SpectralField& velocity) {
  require_vector(velocity, "vorticity_of");
  SpectralField omega = SpectralField::scalar(velocity.truncation());
  auto w = omega.component(0);
  const auto u1 = velocity.component(0);
  const auto u2 = velocity.component(1);
  for (std::size_t i = 0; i < w.size(); ++i) {
    const WaveVector k = velocity.wave_vector(i);
    w[i] = kI * (static_cast<double>(k.k1) * u2[i] - static_cast<double>(k.k2) * u1[i]);
  }
  return omega;
}

SpectralField derivative(const SpectralField& field, int axis) {
  if (axis < 0 || axis >= kDim) throw std::invalid_argument("derivative: axis out of range");
  SpectralField out(field.truncation(), field.kind());
  for (int c = 0; c < field.components(); ++c) {
    const auto src = field.component(c);
    auto dst = out.component(c);
    for (std::size_t i = 0; i < src.size(); ++i) {
      dst[i] = kI * static_cast<double>(field.wave_vector(i)[axis]) * src[i];
    }
  }
  return out;
}

SpectralField divergence(const SpectralField& velocity) {
  require_vector(velocity, "divergence");
  SpectralField out = SpectralField::scalar(velocity.truncation());
  auto d = out.component(0);
  const auto u1 = velocity.component(0);
  const auto u2 = velocity.component(1);
  for (std::size_t i = 0; i < d.size(); ++i) {
    const WaveVector k = velocity.wave_vector(i);
    d[i] = kI * (static_cast<double>(k.k1) * u1[i] + static_cast<double>(k.k2) * u2[i]);
  }
  return out;
}

SpectralField leray_project(const SpectralField& g) {
  require_vector(g, "leray_project");
  SpectralField p = g;
  auto p1 = p.component(0);
  auto p2 = p.component(1);
  for (std::size_t i = 0; i < p1.size(); ++i) {
    const WaveVector k = g.wave_vector(i);
    const long q = k.norm_sq();
    if (q == 0) continue;
    const double a = static_cast<double>(k.k1);
    const double b = static_cast<double>(k.k2);
    const Complex kdotg = (a * p1[i] + b * p2[i]) / static_cast<double>(q);
    p1[i] -= a * kdotg;
    p2[i] -= b * kdotg;
  }
  p.set_solenoidal(true);
  return p;
}

int dealiased_grid_size(int K) {
  int n = std::max(minimum_grid_size(K), 3 * K + 1);
  if (n % 2 != 0) ++n;
  while (!is_smooth_size(n)) n += 2;
  return n;
}

SpectralField nonlinear_term(const SpectralField& omega, const SpectralField& velocity) {
  require_scalar(omega, "nonlinear_term");
  require_vector(velocity, "nonlinear_term");
  if (omega.truncation() != velocity.truncation()) {
    throw std::invalid_argument("nonlinear_term: truncation mismatch");
  }
  const int K = omega.truncation();
  detail::AdvectionWorkspace ws(K, dealiased_grid_size(K));
  auto grids = ws.make_grids();
  ws.synthesize(velocity.component(0), grids.u1);
  ws.synthesize(velocity.component(1), grids.u2);
  ws.synthesize_with(omega.component(0), grids.wx, [](WaveVector k) { return kI * double(k.k1); });
  ws.synthesize_with(omega.component(0), grids.wy, [](WaveVector k) { return kI * double(k.k2); });
  const std::size_t n = grids.u1.size();
  detail::FftBuffer<double> product(n);
  for (std::size_t i = 0; i < n; ++i) {
    product[i] = grids.u1[i] * grids.wx[i] + grids.u2[i] * grids.wy[i];
  }
  SpectralField out = SpectralField::scalar(K);
  ws.analyze(product, out.component(0));
  return out;
}

SpectralField advective_term(const SpectralField& velocity) {
  require_vector(velocity, "advective_term");
  const int K = velocity.truncation();
  detail::AdvectionWorkspace ws(K, dealiased_grid_size(K));
  auto g = ws.make_grids();
  ws.synthesize(velocity.component(0), g.u1);
  ws.synthesize(velocity.component(1), g.u2);
  SpectralField out = SpectralField::vector(K);
  const std::size_t n = g.u1.size();
  detail::FftBuffer<double> product(n);
  for (int m = 0; m < kDim; ++m) {
    ws.synthesize_with(velocity.component(m), g.wx, [](WaveVector k) { return kI * double(k.k1); });
    ws.synthesize_with(velocity.component(m), g.wy, [](WaveVector k) { return kI * double(k.k2); });
    for (std::size_t i = 0; i < n; ++i) product[i] = g.u1[i] * g.wx[i] + g.u2[i] * g.wy[i];
    ws.analyze(product, out.component(m));
  }
  return out;
}

SpectralField shift_and_boost(const SpectralField& velocity, Vec2 a, double t) {
  require_vector(velocity, "shift_and_boost");
  SpectralField out = velocity;
  for (int c = 0; c < kDim; ++c) {
    auto coeffs = out.component(c);
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
      const WaveVector k = velocity.wave_vector(i);
      const double phase = -(k.k1 * a[0] + k.k2 * a[1]) * t;
      if (phase != 0.0) coeffs[i] *= std::polar(1.0, phase);
    }
  }
  out.symmetrize();
  out.at(0, {0, 0}) += a[0];
  out.at(1, {0, 0}) += a[1];
  return out;
}

GridValues grid_evaluate(const SpectralField& field, int grid_size) {
  const int K = field.truncation();
  if (grid_size < minimum_grid_size(K)) {
    throw std::invalid_argument("grid_evaluate: grid size " + std::to_string(grid_size) +
                                " too small for truncation " + std::to_string(K));
  }
  if (grid_size % 2 != 0) throw std::invalid_argument("grid_evaluate: grid size must be even");
  detail::RealFft2d fft(grid_size);
  auto spectrum = fft.make_spectral();
  auto real = fft.make_real();
  GridValues grid{grid_size, field.components(), {}};
  grid.values.resize(static_cast<std::size_t>(field.components()) * fft.real_size());
  for (int c = 0; c < field.components(); ++c) {
    fft.pack(field.component(c), K, spectrum);
    fft.inverse(spectrum, real);
    std::copy(real.data(), real.data() + fft.real_size(),
              grid.values.begin() + static_cast<std::ptrdiff_t>(c * fft.real_size()));
  }
  return grid;
}

SpectralField grid_analyze(const GridValues& grid, int truncation) {
  if (grid.n < minimum_grid_size(truncation)) {
    throw std::invalid_argument("grid_analyze: grid too small for truncation");
  }
  if (grid.n % 2 != 0) throw std::invalid_argument("grid_analyze: grid size must be even");
  detail::RealFft2d fft(grid.n);
  auto spectrum = fft.make_spectral();
  auto real = fft.make_real();
  SpectralField out(truncation, grid.components == 1 ? SpectralField::Kind::Scalar
                                                     : SpectralField::Kind::Vector);
  for (int c = 0; c < grid.components; ++c) {
    const auto src = grid.component(c);
    std::copy(src.begin(), src.end(), real.data());
    fft.forward(real, spectrum);
    fft.unpack(spectrum, truncation, out.component(c));
  }
  return out;
}

double grid_l2_norm_sq(const GridValues& grid) {
  double sum = 0.0;
  for (double v : grid.values) sum += v * v;
  const double h = kTwoPi / grid.n;
  return h * h * sum;
}

}  // namespace rdf
