#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <variant>

#include "rdf/analytic_oracles.hpp"
#include "rdf/growth_analysis.hpp"
#include "rdf/main_theorem.hpp"
#include "test_support.hpp"

using namespace rdf;
using rdf::test::for_each_seed;
using rdf::test::relative_error;

namespace {

const double kHalfPi = 0.5 * kPi;

double sin_gauss(double x1, double x2) { return std::sin(x1) * std::exp(-x2 * x2); }

// sin(x1) e^{-x2²} in ξ space
std::vector<CouetteModal> sin_gauss_modes(double xi_max = 12.0, int points = 1201) {
  return couette_gaussian_modes(1, 1.0, 1.0, xi_max, points, -kHalfPi);
}

double max_diff(const SampledField& a, const SampledField& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i) m = std::max(m, std::abs(a.values[i] - b.values[i]));
  return m;
}

// Point evaluation of a scalar component from its coefficients.
double evaluate(const SpectralField& f, int c, double x1, double x2) {
  Complex s{};
  const auto coeffs = f.component(c);
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    const WaveVector k = f.wave_vector(i);
    s += coeffs[i] * std::polar(1.0, k.k1 * x1 + k.k2 * x2);
  }
  return s.real();
}

}  // namespace

// ---------------------------------------------------------------------------
// Heat semigroup

TEST_CASE("heat semigroup") {
  const SpectralField w = rdf::test::smooth_vorticity(6, 1);
  CHECK(max_abs_difference(heat_semigroup(w, 0.0, Reynolds::finite(100.0)), w) == 0.0);
  CHECK(max_abs_difference(heat_semigroup(w, 5.0, Reynolds::infinite()), w) == 0.0);

  SpectralField mode = SpectralField::scalar(2);
  mode({1, 0}) = 1.0;
  mode({-1, 0}) = 1.0;
  const SpectralField out = heat_semigroup(mode, 1.0, Reynolds::finite(100.0));
  CHECK(out({1, 0}).real() == doctest::Approx(0.990050).epsilon(1e-6));
  CHECK_THROWS_AS(heat_semigroup(w, -1.0, Reynolds::finite(1.0)), std::invalid_argument);
}

TEST_CASE("heat smoothing inequality on random fields") {
  for_each_seed(20, [](std::uint64_t seed, auto& rng) {
    const int K = rdf::test::uniform_int(rng, 2, 16);
    const SpectralField u = random_vector_field(K, seed);
    const double t = rdf::test::uniform(rng, 0.01, 3.0), re = std::pow(10.0, rdf::test::uniform(rng, 0, 4));
    const int n = rdf::test::uniform_int(rng, 1, 4);
    const SpectralField h = heat_semigroup(u, t, Reynolds::finite(re));
    CHECK(sobolev_norm(h, n) <= heat_smoothing_constant(t, re) * sobolev_norm(u, n - 1));
  });
}

// ---------------------------------------------------------------------------
// Couette

TEST_CASE("couette viscous factor") {
  CHECK(couette_viscous_factor(1, 0.5, 1.0, 100.0) == doctest::Approx(0.989225).epsilon(1e-6));
  CHECK(couette_viscous_factor(3, -2.0, 0.0, 10.0) == 1.0);
  const CouetteModal m = sin_gauss_modes().front();
  const CouetteModal same = couette_viscous_evolve(m, 0.0, Reynolds::finite(10.0));
  CHECK(same.amplitudes == m.amplitudes);
  CHECK(couette_viscous_evolve(m, 4.0, Reynolds::infinite()).amplitudes == m.amplitudes);
}

TEST_CASE("couette viscous factor solves the ξ-space ODE") {
  // ∂t dΩ = (1/Re)[-ξ² + 2ntξ - n²(t² + 1)] dΩ, integrated by classical RK4
  for_each_seed(10, [](std::uint64_t, auto& rng) {
    const int n = rdf::test::uniform_int(rng, -3, 3);
    const double xi = rdf::test::uniform(rng, -5, 5), re = rdf::test::uniform(rng, 10, 1000);
    const double T = rdf::test::uniform(rng, 0.5, 4.0);
    auto rate = [&](double t) { return (-xi * xi + 2.0 * n * t * xi - n * n * (t * t + 1.0)) / re; };
    const int steps = 4000;
    const double h = T / steps;
    double y = 1.0;
    for (int s = 0; s < steps; ++s) {
      const double t = s * h;
      const double k1 = rate(t) * y, k2 = rate(t + h / 2) * (y + h / 2 * k1);
      const double k3 = rate(t + h / 2) * (y + h / 2 * k2), k4 = rate(t + h) * (y + h * k3);
      y += h / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
    }
    CHECK(std::abs(y - couette_viscous_factor(n, xi, T, re)) < 1e-10);
  });
}

TEST_CASE("couette inviscid transport") {
  const CouetteGrid grid{16, 256, 8.0};
  const SampledField f0 = sample_field(sin_gauss, grid);
  CHECK(max_diff(couette_inviscid_evolve(f0, 0.0), f0) < 1e-14);
  CHECK(max_diff(couette_inviscid_evolve(sin_gauss, 0.0, grid), f0) == 0.0);

  const double h0 = quadrature_l2_norm_sq(f0);
  CHECK(h0 == doctest::Approx(kPi * std::sqrt(kHalfPi)).epsilon(1e-10));
  for (double t : {0.5, 3.0, 10.0, 40.0}) {
    CAPTURE(t);
    const SampledField exact = couette_inviscid_evolve(sin_gauss, t, grid);
    const SampledField sampled = couette_inviscid_evolve(f0, t);
    CHECK(max_diff(exact, sampled) < 1e-12);
    CHECK(std::abs(quadrature_l2_norm_sq(exact) - h0) < 1e-8);
  }
}

TEST_CASE("sampled Sobolev norms agree with the modal formula") {
  const CouetteGrid grid{16, 512, 8.0};
  const auto modes = sin_gauss_modes();
  for (double t : {0.0, 2.0, 5.0}) {
    const SampledField f = couette_inviscid_evolve(sin_gauss, t, grid);
    for (int k : {0, 1, 2}) {
      CAPTURE(t);
      CAPTURE(k);
      CHECK(relative_error(sampled_sobolev_norm(f, k), std::sqrt(couette_inviscid_hk_norm_sq(modes, t, k))) < 1e-8);
    }
  }
}

TEST_CASE("couette H^k norms grow like t^k") {
  const auto modes = sin_gauss_modes();
  for (int k : {1, 2}) {
    std::vector<Sample> s;
    for (int t = 5; t <= 50; ++t) s.emplace_back(t, std::sqrt(couette_inviscid_hk_norm_sq(modes, t, k)));
    CHECK(std::abs(fit_power(s).rate() - k) < 0.05);
  }
}

TEST_CASE("couette reconstruction") {
  const CouetteGrid grid{16, 256, 8.0};
  const auto modes = sin_gauss_modes();

  SUBCASE("matches transport of the physical field") {
    for (double t : {0.0, 1.0, 4.0}) {
      CAPTURE(t);
      const auto rec = couette_reconstruct(modes, t, grid);
      CHECK(!rec.warning);
      CHECK(rec.max_imaginary < 1e-14);
      CHECK(max_diff(rec.field, couette_inviscid_evolve(sin_gauss, t, grid)) < 1e-10);
    }
  }
  SUBCASE("a single n = 0 mode is independent of x1") {
    const auto flat = couette_gaussian_modes(0, 1.0, 1.0, 12.0, 801);
    const auto rec = couette_reconstruct(flat, 3.0, grid);
    for (int j1 = 1; j1 < grid.n1; ++j1)
      for (int j2 = 0; j2 < grid.n2; ++j2) CHECK(rec.field.at(j1, j2) == rec.field.at(0, j2));
  }
  SUBCASE("viscous H0 identity and monotone decay") {
    const Reynolds re = Reynolds::finite(50.0);
    double prev = 1e300;
    for (double t : {0.0, 0.5, 1.0, 2.0, 4.0}) {
      CAPTURE(t);
      std::vector<CouetteModal> evolved;
      for (const auto& m : modes) evolved.push_back(couette_viscous_evolve(m, t, re));
      const auto rec = couette_reconstruct(evolved, t, grid);
      const double closed = couette_h0_norm_sq(modes, t, re);
      CHECK(std::abs(closed - quadrature_l2_norm_sq(rec.field)) < 1e-6);
      CHECK(closed <= prev);
      prev = closed;
    }
    CHECK(couette_h0_norm_sq(modes, 0.0, re) == doctest::Approx(kPi * std::sqrt(kHalfPi)).epsilon(1e-10));
  }
  SUBCASE("modal set must be closed under conjugation") {
    CHECK_THROWS_AS(couette_reconstruct({modes.front()}, 0.0, grid), std::invalid_argument);
    auto broken = modes;
    broken[1].amplitudes[3] += 0.1;
    CHECK_THROWS_AS(couette_reconstruct(broken, 0.0, grid), std::invalid_argument);
  }
  SUBCASE("narrow windows produce a warning") {
    const auto narrow = sin_gauss_modes(2.0, 201);
    CHECK(couette_window_edge(narrow.front()) > 1e-12);
    const auto rec = couette_reconstruct(narrow, 0.0, grid);
    REQUIRE(rec.warning);
    CHECK(rec.warning->find("window edge") != std::string::npos);
  }
}

// ---------------------------------------------------------------------------
// Exact family

TEST_CASE("exact family velocity") {
  ExactFamilyParams p;
  p.gamma = 1.0;
  p.sigma = 0.0;
  p.n_trunc = 100;
  const SpectralField u = exact_family_velocity(p, 0.0, 100);
  CHECK(evaluate(u, 0, 0.3, kHalfPi) == doctest::Approx(0.988945).epsilon(1e-6));
  CHECK(u.divergence_defect() == 0.0);
  CHECK(u.reality_defect() == 0.0);

  p.sigma = 0.3;
  p.n_trunc = 8;
  const SpectralField v = exact_family_velocity(p, 0.7, 8);
  for (std::size_t i = 0; i < v.modes_per_component(); ++i) {
    CHECK(v.component(1)[i] == (v.wave_vector(i).norm_sq() == 0 ? Complex(0.3) : Complex(0.0)));
  }
  CHECK_THROWS_AS(exact_family_velocity(p, 0.0, 4), std::invalid_argument);
  p.gamma = 0.5;
  CHECK_THROWS_AS(exact_family_velocity(p, 0.0, 8), std::invalid_argument);
  p.gamma = 1.1;
  CHECK_THROWS_AS(exact_family_velocity(p, 0.0, 8), std::invalid_argument);
}

TEST_CASE("exact family solves the vorticity equation") {
  for (double sigma : {0.0, 0.5}) {
    CAPTURE(sigma);
    ExactFamilyParams p{1.0, sigma, Reynolds::finite(100.0), 16};
    const double t = 0.5;
    SolverConfig c;
    c.truncation = 16;
    c.re = p.re;
    c.mean_flow = {0.0, sigma};
    VorticitySolver solver(c);
    const SpectralField w = exact_family_vorticity(p, t, 16);
    // ∂t of mode (0, n) is (-n²/Re - i n σ) times the coefficient
    SpectralField dwdt = SpectralField::scalar(16);
    for (int n = -16; n <= 16; ++n) {
      dwdt({0, n}) = Complex(-double(n * n) / 100.0, -n * sigma) * w({0, n});
    }
    CHECK(max_abs_difference(solver.tendency(w), dwdt) < 1e-12);
  }
}

TEST_CASE("exact family σ-derivative") {
  ExactFamilyParams p{1.0, 0.5, Reynolds::finite(100.0), 12};
  SpectralField boost = SpectralField::vector(12);
  boost.at(1, {0, 0}) = 1.0;
  CHECK(max_abs_difference(exact_family_dsigma(p, 0.0, 12), boost) == 0.0);

  const SpectralField exact = exact_family_dsigma(p, 1.0, 12);
  CHECK(max_abs_difference(exact, translation_derivative(exact_family_velocity(p, 1.0, 12), 1.0, 1)) < 1e-16);

  double errs[2];
  int i = 0;
  for (double h : {1e-3, 1e-4}) {
    ExactFamilyParams q = p;
    q.sigma += h;
    SpectralField fd = exact_family_velocity(q, 1.0, 12) - exact_family_velocity(p, 1.0, 12);
    fd *= 1.0 / h;
    errs[i++] = max_abs_difference(fd, exact);
  }
  CHECK(std::log10(errs[0] / errs[1]) > 0.9);
}

TEST_CASE("σ-derivative H3 norm") {
  CHECK(std::get<FiniteNorm>(dsigma_h3_norm({1.0, 0.0, Reynolds::finite(10.0), 1}, 0.0)).value ==
        doctest::Approx(kTwoPi).epsilon(1e-15));
  CHECK(std::holds_alternative<Divergent>(dsigma_h3_norm({1.0, 0.0, Reynolds::infinite(), 1}, 1.0)));
  CHECK(std::holds_alternative<Divergent>(dsigma_h3_norm({0.6, 0.0, Reynolds::infinite(), 1}, 0.1)));
  CHECK(std::get<FiniteNorm>(dsigma_h3_norm({1.0, 0.0, Reynolds::infinite(), 1}, 0.0)).value ==
        doctest::Approx(kTwoPi));

  // The series agrees with the norm of a fully resolved truncated field.
  ExactFamilyParams p{0.75, 0.2, Reynolds::finite(100.0), 96};
  const auto series = std::get<FiniteNorm>(dsigma_h3_norm(p, 1.0));
  CHECK(relative_error(series.value, sobolev_norm(exact_family_dsigma(p, 1.0, 96), 3)) < 1e-13);
  CHECK(series.remainder_bound < 1e-12 * series.value * series.value);

  const auto big = std::get<FiniteNorm>(dsigma_h3_norm({1.0, 0.0, Reynolds::finite(1e4), 1}, 1.0));
  CHECK(big.value > exact_family_lower_bound(1.0, 1.0, 1e4));
}

TEST_CASE("lower bound formula") {
  CHECK(exact_family_lower_bound(1.0, 1.0, 123.0) == doctest::Approx(6.34835).epsilon(2e-6));
  CHECK(exact_family_lower_bound(0.8, 1e-14, 100.0) == doctest::Approx(std::sqrt(2.0) * kPi).epsilon(1e-9));
  const double base = std::sqrt(2.0) * kPi;
  const double r = (exact_family_lower_bound(0.75, 1.0, 1e4) - base) / (exact_family_lower_bound(0.75, 1.0, 1e2) - base);
  CHECK(r == doctest::Approx(std::pow(100.0, 0.125)).epsilon(1e-12));
  double prev = 0.0;
  for (double re = 10.0; re < 1e6; re *= 3.0) {
    const double v = exact_family_lower_bound(0.75, 1.0, re);
    CHECK(v > prev);
    prev = v;
  }
  CHECK_THROWS_AS(exact_family_lower_bound(1.0, 0.0, 10.0), std::invalid_argument);
}

TEST_CASE("H3 norm exceeds the lower bound and grows with Re") {
  for (double gamma : {0.6, 0.75, 1.0}) {
    for (double t : {0.25, 0.5, 1.0}) {
      double prev = 0.0;
      for (double re : {1e2, 1e3, 1e4}) {
        CAPTURE(gamma);
        CAPTURE(t);
        CAPTURE(re);
        const auto v = std::get<FiniteNorm>(dsigma_h3_norm({gamma, 0.0, Reynolds::finite(re), 1}, t)).value;
        CHECK(v > exact_family_lower_bound(gamma, t, re));
        CHECK(v >= prev);
        prev = v;
      }
    }
  }
}
