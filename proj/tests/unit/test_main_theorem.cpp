#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "rdf/main_theorem.hpp"
#include "test_support.hpp"

using namespace rdf;
using rdf::test::for_each_seed;
using rdf::test::relative_error;

namespace {

const Complex I(0.0, 1.0);

SpectralField sin_x2_velocity(int K) {
  SpectralField u = SpectralField::vector(K);
  u.at(0, {0, 1}) = -0.5 * I;
  u.at(0, {0, -1}) = 0.5 * I;
  return u;
}

}  // namespace

TEST_CASE("translation derivative at t = 0 is the unit boost") {
  const SpectralField u = rdf::test::smooth_velocity(5, 4);
  for (int m = 0; m < 2; ++m) {
    SpectralField e = SpectralField::vector(5);
    e.at(m, {0, 0}) = 1.0;
    CHECK(max_abs_difference(translation_derivative(u, 0.0, m), e) == 0.0);
  }
}

TEST_CASE("translation derivative of sin x2 along x2") {
  const SpectralField u = sin_x2_velocity(3);
  const SpectralField d = translation_derivative(u, 1.0, 1);
  CHECK(d.at(1, {0, 0}) == Complex(1.0));
  CHECK(std::abs(d.at(0, {0, 1}) - (-I) * u.at(0, {0, 1})) < 1e-16);
  CHECK(std::abs(d.at(0, {0, -1}) - I * u.at(0, {0, -1})) < 1e-16);
  CHECK(d.reality_defect() < 1e-16);
  CHECK_THROWS_AS(translation_derivative(u, 1.0, 2), std::invalid_argument);
}

TEST_CASE("translation derivative matches finite differences to first order") {
  const SpectralField u = rdf::test::smooth_velocity(6, 9);
  const double t = 0.7;
  for (int m = 0; m < 2; ++m) {
    CAPTURE(m);
    const SpectralField exact = translation_derivative(u, t, m);
    const SpectralField base = shift_and_boost(u, {0.0, 0.0}, t);
    double errs[2];
    int i = 0;
    for (double eps : {1e-3, 1e-4}) {
      Vec2 a{0.0, 0.0};
      a[m] = eps;
      SpectralField fd = shift_and_boost(u, a, t) - base;
      fd *= 1.0 / eps;
      errs[i++] = max_abs_difference(fd, exact);
    }
    const double order = std::log10(errs[0] / errs[1]);
    CHECK(order > 0.9);
    CHECK(order < 1.1);
  }
}

TEST_CASE("closed-form total norm: hand values") {
  const SpectralField u = rdf::test::smooth_velocity(4, 2);
  CHECK(translation_derivative_normsq_total(u, 3, 0.0) == doctest::Approx(8.0 * kPi * kPi).epsilon(1e-15));
  CHECK(translation_derivative_normsq_total(sin_x2_velocity(4), 3, 1.0) ==
        doctest::Approx(16.0 * kPi * kPi).epsilon(1e-14));
  CHECK(translation_derivative_normsq_direct(sin_x2_velocity(4), 3, 1.0) ==
        doctest::Approx(16.0 * kPi * kPi).epsilon(1e-14));
}

TEST_CASE("closed form equals direct sum on random fields") {
  for_each_seed(25, [](std::uint64_t seed, auto& rng) {
    const int K = rdf::test::uniform_int(rng, 1, 16);
    const SpectralField u = random_vector_field(K, seed);
    for (int n = 0; n <= 5; ++n) {
      for (double t : {0.0, 0.5, 1.0, 2.0}) {
        CHECK(relative_error(translation_derivative_normsq_total(u, n, t),
                             translation_derivative_normsq_direct(u, n, t)) < 1e-12);
      }
    }
  });
}

TEST_CASE("total norm is nondecreasing in t") {
  for_each_seed(10, [](std::uint64_t seed, auto& rng) {
    const SpectralField u = rdf::test::smooth_velocity(8, seed);
    const int n = rdf::test::uniform_int(rng, 0, 4);
    double prev = 0.0;
    for (double t = 0.0; t <= 3.0; t += 0.25) {
      const double v = translation_derivative_normsq_total(u, n, t);
      CHECK(v >= prev);
      prev = v;
    }
  });
}

TEST_CASE("tail spectrum amplitudes") {
  TailSpectrumSpec spec;
  spec.truncation = 8;
  spec.decay = 3.0;
  spec.amplitude = 2.0;
  const SpectralField u = tail_spectrum_field(spec);
  CHECK(u.reality_defect() < 1e-15);
  CHECK(u.divergence_defect() < 1e-13);
  for (std::size_t i = 0; i < u.modes_per_component(); ++i) {
    const WaveVector k = u.wave_vector(i);
    if (k.norm_sq() == 0) continue;
    const double mag = std::hypot(std::abs(u.component(0)[i]), std::abs(u.component(1)[i]));
    CHECK(mag == doctest::Approx(2.0 * std::pow(1.0 + double(k.norm_sq()), -1.5)).epsilon(1e-13));
  }
  spec.profile = TailProfile::OnePlusK;
  const SpectralField v = tail_spectrum_field(spec);
  const double mag = std::hypot(std::abs(v.at(0, {3, 4})), std::abs(v.at(1, {3, 4})));
  CHECK(mag == doctest::Approx(2.0 * std::pow(6.0, -3.0)).epsilon(1e-13));
}

TEST_CASE("divergence scan") {
  TailSpectrumSpec spec;
  spec.decay = 5.0;  // n + 1 + d/2 with n = 3
  const std::vector<int> ks{16, 32, 64, 128};

  SUBCASE("borderline decay grows like log K") {
    const auto rows = divergence_scan(spec, 3, 1.0, ks);
    REQUIRE(rows.size() == 4);
    CHECK(std::isnan(rows[0].norm_sq_increment_per_lnK));
    for (std::size_t i = 1; i < rows.size(); ++i) {
      CHECK(rows[i].norm_total > rows[i - 1].norm_total);
      CHECK(rows[i].norm_sq_increment_per_lnK > 0.0);
    }
    for (std::size_t i = 2; i < rows.size(); ++i) {
      const double ratio = rows[i].norm_sq_increment_per_lnK / rows[i - 1].norm_sq_increment_per_lnK;
      CHECK(ratio >= 0.8);
      CHECK(ratio <= 1.2);
    }
  }
  SUBCASE("convergent control saturates") {
    spec.decay = 6.0;
    const auto rows = divergence_scan(spec, 3, 1.0, ks);
    for (std::size_t i = 2; i < rows.size(); ++i) {
      CHECK(rows[i].norm_sq_increment_per_lnK <= 0.5 * rows[i - 1].norm_sq_increment_per_lnK);
    }
  }
  SUBCASE("t = 0 gives the boost norm at every K") {
    for (const auto& r : divergence_scan(spec, 3, 0.0, ks)) {
      CHECK(r.norm_total * r.norm_total == doctest::Approx(8.0 * kPi * kPi).epsilon(1e-14));
    }
  }
  SUBCASE("truncations must increase") {
    CHECK_THROWS_AS(divergence_scan(spec, 3, 1.0, {16, 16}), std::invalid_argument);
    CHECK_THROWS_AS(divergence_scan(spec, 3, 1.0, {32, 16}), std::invalid_argument);
  }
  SUBCASE("scan is deterministic in the seed") {
    const auto a = divergence_scan(spec, 3, 1.0, {8, 16});
    const auto b = divergence_scan(spec, 3, 1.0, {8, 16});
    CHECK(a[1].norm_total == b[1].norm_total);
  }
}
