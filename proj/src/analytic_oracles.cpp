#include "rdf/analytic_oracles.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <sstream>
#include <stdexcept>

namespace rdf {

namespace {

constexpr Complex kI(0.0, 1.0);

double trapezoid_weight(std::size_t i, std::size_t n) { return (i == 0 || i + 1 == n) ? 0.5 : 1.0; }

std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

// ---------------------------------------------------------------------------
// Heat semigroup

SpectralField heat_semigroup(const SpectralField& du0, double t, const Reynolds& re) {
  if (t < 0.0) throw std::invalid_argument("heat_semigroup: t must be >= 0");
  SpectralField out = du0;
  const double nu = re.viscosity();
  if (nu == 0.0 || t == 0.0) return out;
  for (int c = 0; c < out.components(); ++c) {
    auto coeffs = out.component(c);
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
      coeffs[i] *= std::exp(-static_cast<double>(out.wave_vector(i).norm_sq()) * t * nu);
    }
  }
  return out;
}

double heat_smoothing_constant(double t, double re) {
  if (!(t > 0.0)) throw std::invalid_argument("heat_smoothing_constant: t must be > 0");
  return std::sqrt(re / t) / std::sqrt(2.0 * std::exp(1.0)) + 1.0;
}

// ---------------------------------------------------------------------------
// Couette: physical space

SampledField sample_field(const std::function<double(double, double)>& f, const CouetteGrid& grid) {
  SampledField out{grid, std::vector<double>(static_cast<std::size_t>(grid.n1) * grid.n2)};
  for (int j1 = 0; j1 < grid.n1; ++j1) {
    for (int j2 = 0; j2 < grid.n2; ++j2) out.at(j1, j2) = f(grid.x1(j1), grid.x2(j2));
  }
  return out;
}

SampledField couette_inviscid_evolve(const std::function<double(double, double)>& domega0, double t,
                                     const CouetteGrid& grid) {
  return sample_field([&](double x1, double x2) { return domega0(x1 - x2 * t, x2); }, grid);
}

SampledField couette_inviscid_evolve(const SampledField& domega0, double t) {
  const CouetteGrid& g = domega0.grid;
  SampledField out{g, std::vector<double>(domega0.values.size())};
  const int n1 = g.n1;
  std::vector<Complex> modes(n1);
  for (int j2 = 0; j2 < g.n2; ++j2) {
    const double x2 = g.x2(j2);
    for (int m = 0; m < n1; ++m) {
      Complex s{};
      for (int j1 = 0; j1 < n1; ++j1) s += domega0.at(j1, j2) * std::polar(1.0, -kTwoPi * m * j1 / n1);
      modes[m] = s / static_cast<double>(n1);
    }
    for (int j1 = 0; j1 < n1; ++j1) {
      const double x1 = g.x1(j1);
      double v = 0.0;
      for (int m = 0; m < n1; ++m) {
        const int wn = m <= n1 / 2 ? m : m - n1;
        if (2 * m == n1) {
          // Nyquist mode: real interpolant cos(N/2 (x1 - x2 t)).
          v += modes[m].real() * std::cos(wn * (x1 - x2 * t));
        } else {
          v += (modes[m] * std::polar(1.0, wn * (x1 - x2 * t))).real();
        }
      }
      out.at(j1, j2) = v;
    }
  }
  return out;
}

double quadrature_l2_norm_sq(const SampledField& field) {
  double sum = 0.0;
  for (double v : field.values) sum += v * v;
  return sum * field.grid.h1() * field.grid.h2();
}

double sampled_sobolev_norm(const SampledField& field, int k) {
  if (k < 0) throw std::invalid_argument("Sobolev index must be nonnegative");
  const int n1 = field.grid.n1;
  const int n2 = field.grid.n2;
  const std::size_t n = static_cast<std::size_t>(n1) * n2;
  auto* buf = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n));
  fftw_plan plan;
  {
    std::lock_guard lock(fftw_planner_mutex());
    plan = fftw_plan_dft_2d(n1, n2, buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
  }
  for (std::size_t i = 0; i < n; ++i) {
    buf[i][0] = field.values[i];
    buf[i][1] = 0.0;
  }
  fftw_execute(plan);
  const double xi2_unit = kPi / field.grid.half_width;
  double sum = 0.0;
  for (int m1 = 0; m1 < n1; ++m1) {
    const double a = m1 <= n1 / 2 ? m1 : m1 - n1;
    for (int m2 = 0; m2 < n2; ++m2) {
      const double b = (m2 <= n2 / 2 ? m2 : m2 - n2) * xi2_unit;
      const auto& c = buf[static_cast<std::size_t>(m1) * n2 + m2];
      const double q = a * a + b * b;
      double w = 1.0, term = 1.0;
      for (int j = 1; j <= k; ++j) {
        term *= q;
        w += term;
      }
      sum += w * (c[0] * c[0] + c[1] * c[1]);
    }
  }
  {
    std::lock_guard lock(fftw_planner_mutex());
    fftw_destroy_plan(plan);
  }
  fftw_free(buf);
  const double area = kTwoPi * 2.0 * field.grid.half_width;
  return std::sqrt(area * sum / (static_cast<double>(n) * n));
}

// ---------------------------------------------------------------------------
// Couette: ξ space

CouetteModal make_couette_modal(int n, const std::function<Complex(double)>& profile, double xi_max,
                                int points) {
  if (points < 3 || !(xi_max > 0.0)) throw std::invalid_argument("bad ξ window");
  CouetteModal m{n, xi_max, 2.0 * xi_max / (points - 1), {}};
  m.amplitudes.resize(static_cast<std::size_t>(points));
  for (std::size_t i = 0; i < m.size(); ++i) m.amplitudes[i] = profile(m.xi(i));
  return m;
}

std::vector<CouetteModal> couette_gaussian_modes(int n, double amplitude, double width,
                                                 double xi_max, int points, double phase) {
  // FT of e^{-x²/w²} with dΩ = (1/2π)∫ f e^{-iξx} dx is (w/(2√π)) e^{-ξ²w²/4}.
  const double base = width / (2.0 * std::sqrt(kPi));
  auto gaussian = [=](double xi) { return base * std::exp(-0.25 * xi * xi * width * width); };
  if (n == 0) {
    const double a = amplitude * std::cos(phase);
    return {make_couette_modal(0, [&](double xi) { return Complex(a * gaussian(xi), 0.0); }, xi_max,
                               points)};
  }
  const Complex c = 0.5 * amplitude * std::polar(1.0, phase);
  return {make_couette_modal(n, [&](double xi) { return c * gaussian(xi); }, xi_max, points),
          make_couette_modal(-n, [&](double xi) { return std::conj(c) * gaussian(xi); }, xi_max,
                             points)};
}

double couette_viscous_factor(int n, double xi, double t, double re) {
  const double shift = xi - 0.5 * n * t;
  return std::exp(-(t / re) * (shift * shift + n * n * (t * t / 12.0 + 1.0)));
}

CouetteModal couette_viscous_evolve(const CouetteModal& modal, double t, const Reynolds& re) {
  if (t < 0.0) throw std::invalid_argument("couette_viscous_evolve: t must be >= 0");
  CouetteModal out = modal;
  if (re.is_infinite()) return out;
  for (std::size_t i = 0; i < out.size(); ++i) {
    out.amplitudes[i] *= couette_viscous_factor(modal.n, modal.xi(i), t, re.value());
  }
  return out;
}

double couette_window_edge(const CouetteModal& modal) {
  if (modal.amplitudes.empty()) return 0.0;
  return std::max(std::abs(modal.amplitudes.front()), std::abs(modal.amplitudes.back()));
}

CouetteReconstruction couette_reconstruct(const std::vector<CouetteModal>& modals, double t,
                                          const CouetteGrid& grid) {
  // Closure under conjugation with ξ reflection.
  for (const auto& m : modals) {
    if (m.n == 0) continue;
    auto partner = std::find_if(modals.begin(), modals.end(), [&](const CouetteModal& o) {
      return o.n == -m.n && o.size() == m.size() && o.xi_max == m.xi_max;
    });
    if (partner == modals.end()) {
      throw std::invalid_argument("modal set not closed under n -> -n (missing n=" +
                                  std::to_string(-m.n) + ")");
    }
    double scale = 0.0, defect = 0.0;
    for (std::size_t i = 0; i < m.size(); ++i) {
      scale = std::max(scale, std::abs(m.amplitudes[i]));
      defect = std::max(defect, std::abs(m.amplitudes[i] -
                                         std::conj(partner->amplitudes[m.size() - 1 - i])));
    }
    if (defect > 1e-12 * std::max(1.0, scale)) {
      throw std::invalid_argument("modal pair n=±" + std::to_string(std::abs(m.n)) +
                                  " violates dΩ_{(-n)ξ} = conj(dΩ_{n(-ξ)})");
    }
  }

  CouetteReconstruction result;
  result.field = SampledField{grid, std::vector<double>(static_cast<std::size_t>(grid.n1) * grid.n2)};
  std::vector<Complex> acc(result.field.values.size());
  std::ostringstream warn;
  for (const auto& m : modals) {
    const double edge = couette_window_edge(m);
    if (edge > 1e-12) {
      warn << "mode n=" << m.n << ": window edge amplitude " << edge
           << " exceeds 1e-12 (omitted-tail estimate <= " << edge * 2.0 * m.xi_max << "); ";
    }
    if (grid.half_width >= kPi / m.h) {
      warn << "mode n=" << m.n << ": ξ spacing " << m.h << " aliases beyond |x2| = " << kPi / m.h
           << "; ";
    }
    for (int j2 = 0; j2 < grid.n2; ++j2) {
      const double x2 = grid.x2(j2);
      Complex profile{};
      for (std::size_t i = 0; i < m.size(); ++i) {
        profile += trapezoid_weight(i, m.size()) * m.amplitudes[i] * std::polar(1.0, m.xi(i) * x2);
      }
      profile *= m.h;
      for (int j1 = 0; j1 < grid.n1; ++j1) {
        const double phase = m.n * (grid.x1(j1) - x2 * t);
        acc[static_cast<std::size_t>(j1) * grid.n2 + j2] += std::polar(1.0, phase) * profile;
      }
    }
  }
  for (std::size_t i = 0; i < acc.size(); ++i) {
    result.field.values[i] = acc[i].real();
    result.max_imaginary = std::max(result.max_imaginary, std::abs(acc[i].imag()));
  }
  if (auto w = warn.str(); !w.empty()) result.warning = w;
  return result;
}

double couette_h0_norm_sq(const std::vector<CouetteModal>& initial, double t, const Reynolds& re) {
  double total = 0.0;
  for (const auto& m : initial) {
    double s = 0.0;
    for (std::size_t i = 0; i < m.size(); ++i) {
      const double f = re.is_infinite() ? 1.0 : couette_viscous_factor(m.n, m.xi(i), t, re.value());
      s += trapezoid_weight(i, m.size()) * std::norm(m.amplitudes[i]) * f * f;
    }
    total += s * m.h;
  }
  return 4.0 * kPi * kPi * total;
}

double couette_inviscid_hk_norm_sq(const std::vector<CouetteModal>& initial, double t, int k) {
  if (k < 0) throw std::invalid_argument("Sobolev index must be nonnegative");
  double total = 0.0;
  for (const auto& m : initial) {
    double s = 0.0;
    for (std::size_t i = 0; i < m.size(); ++i) {
      const double eta = m.xi(i) - m.n * t;
      const double q = static_cast<double>(m.n) * m.n + eta * eta;
      double w = 1.0, term = 1.0;
      for (int j = 1; j <= k; ++j) {
        term *= q;
        w += term;
      }
      s += trapezoid_weight(i, m.size()) * std::norm(m.amplitudes[i]) * w;
    }
    total += s * m.h;
  }
  return 4.0 * kPi * kPi * total;
}

// ---------------------------------------------------------------------------
// Exact family

void ExactFamilyParams::validate() const {
  if (!(gamma > 0.5 && gamma <= 1.0)) throw std::invalid_argument("gamma must lie in (1/2, 1]");
  if (n_trunc < 1) throw std::invalid_argument("N_trunc must be >= 1");
  if (!std::isfinite(sigma)) throw std::invalid_argument("sigma must be finite");
}

namespace {

double decay_factor(const ExactFamilyParams& p, int n, double t) {
  return p.re.is_infinite() ? 1.0 : std::exp(-static_cast<double>(n) * n * t / p.re.value());
}

void require_fits(const ExactFamilyParams& p, int K) {
  p.validate();
  if (p.n_trunc > K) {
    throw std::invalid_argument("exact family: N_trunc exceeds the field truncation");
  }
}

}  // namespace

SpectralField exact_family_velocity(const ExactFamilyParams& p, double t, int K) {
  require_fits(p, K);
  SpectralField u = SpectralField::vector(K);
  for (int n = 1; n <= p.n_trunc; ++n) {
    const double a = std::pow(static_cast<double>(n), -(3.0 + p.gamma)) * decay_factor(p, n, t);
    // sin θ = (e^{iθ} - e^{-iθ}) / 2i with θ = n (x2 - σt)
    const Complex c = a * std::polar(1.0, -n * p.sigma * t) / (2.0 * kI);
    u.at(0, {0, n}) = c;
    u.at(0, {0, -n}) = std::conj(c);
  }
  u.at(1, {0, 0}) = p.sigma;
  u.set_solenoidal(true);
  return u;
}

SpectralField exact_family_vorticity(const ExactFamilyParams& p, double t, int K) {
  const SpectralField u = exact_family_velocity(p, t, K);
  return vorticity_of(u);
}

SpectralField exact_family_dsigma(const ExactFamilyParams& p, double t, int K) {
  require_fits(p, K);
  SpectralField d = SpectralField::vector(K);
  for (int n = 1; n <= p.n_trunc; ++n) {
    const double a = -t * std::pow(static_cast<double>(n), -(2.0 + p.gamma)) * decay_factor(p, n, t);
    const Complex c = 0.5 * a * std::polar(1.0, -n * p.sigma * t);
    d.at(0, {0, n}) = c;
    d.at(0, {0, -n}) = std::conj(c);
  }
  d.at(1, {0, 0}) = 1.0;
  d.set_solenoidal(true);
  return d;
}

SeriesNorm dsigma_h3_norm(const ExactFamilyParams& p, double t) {
  p.validate();
  if (t < 0.0) throw std::invalid_argument("dsigma_h3_norm: t must be >= 0");
  if (t == 0.0) return FiniteNorm{kTwoPi, 0.0, 0};
  // Terms behave like n^{2-2γ} e^{-2n²t/Re}; with no viscosity the tail
  // exponent 2 - 2γ >= -1 makes the series diverge.
  if (p.re.is_infinite()) return Divergent{};

  const double a = 2.0 * t / p.re.value();
  const double power = 2.0 - 2.0 * p.gamma;  // in [0, 1)
  double series = 0.0;
  double bound = std::numeric_limits<double>::infinity();
  long n = 0;
  while (true) {
    ++n;
    const double nn = static_cast<double>(n);
    const double q = nn * nn;
    const double weight = 1.0 + q + q * q + q * q * q;
    series += std::pow(nn, -2.0 * (2.0 + p.gamma)) * std::exp(-a * q) * weight;
    // For x >= N with a N² >= power/2 the summand is dominated by the
    // decreasing 4 x^{power} e^{-a x²} <= 4 N^{power-1} x e^{-a x²}.
    if (a * q >= 0.5 * power) {
      bound = 4.0 * std::pow(nn, power - 1.0) * std::exp(-a * q) / (2.0 * a);
      if (bound <= 1e-17 * series) break;
    }
    if (n > 100000000L) break;
  }
  const double scale = kBoxMeasure * 0.5 * t * t;
  const double value_sq = kBoxMeasure + scale * series;
  return FiniteNorm{std::sqrt(value_sq), scale * bound, n};
}

double exact_family_lower_bound(double gamma, double t, double re) {
  if (!(t > 0.0)) throw std::invalid_argument("exact_family_lower_bound: t must be > 0");
  if (!(re > 0.0) || !std::isfinite(re)) {
    throw std::invalid_argument("exact_family_lower_bound: Re must be finite and positive");
  }
  const double inner = std::sqrt(t) * std::sqrt(re) / (2.0 * std::sqrt(2.0));
  return std::sqrt(2.0) * kPi + kPi / std::sqrt(std::exp(1.0)) * std::pow(t, gamma) *
                                    std::pow(inner, 1.0 - gamma);
}

}  // namespace rdf
