#include "rdf/random_fields.hpp"

#include <cmath>
#include <stdexcept>

namespace rdf {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

bool upper_half(WaveVector k) { return k.k2 > 0 || (k.k2 == 0 && k.k1 > 0); }

}  // namespace

double mode_uniform(std::uint64_t seed, WaveVector k, std::uint64_t stream) {
  std::uint64_t h = splitmix64(seed);
  h = splitmix64(h ^ static_cast<std::uint64_t>(static_cast<std::int64_t>(k.k1)));
  h = splitmix64(h ^ (static_cast<std::uint64_t>(static_cast<std::int64_t>(k.k2)) << 1));
  h = splitmix64(h ^ stream);
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

SpectralField random_scalar(int K, std::uint64_t seed,
                            const std::function<double(double)>& amplitude) {
  SpectralField f = SpectralField::scalar(K);
  for (int k1 = -K; k1 <= K; ++k1) {
    for (int k2 = -K; k2 <= K; ++k2) {
      const WaveVector k{k1, k2};
      if (!upper_half(k)) continue;
      const double a = amplitude(std::sqrt(static_cast<double>(k.norm_sq())));
      if (a == 0.0) continue;
      const double phase = kTwoPi * mode_uniform(seed, k);
      f(k) = std::polar(a, phase);
    }
  }
  f.symmetrize();
  return f;
}

SpectralField random_solenoidal_velocity(int K, std::uint64_t seed,
                                         const std::function<double(double)>& amplitude) {
  // u_k = i (k2, -k1)/|k| a_k with a real-field scalar a: |u_k| = |a_k|.
  const SpectralField a = random_scalar(K, seed, amplitude);
  SpectralField u = SpectralField::vector(K);
  for (std::size_t i = 0; i < u.modes_per_component(); ++i) {
    const WaveVector k = u.wave_vector(i);
    if (k.norm_sq() == 0) continue;
    const double inv = 1.0 / std::sqrt(static_cast<double>(k.norm_sq()));
    const Complex c = Complex(0.0, 1.0) * a.component(0)[i] * inv;
    u.component(0)[i] = static_cast<double>(k.k2) * c;
    u.component(1)[i] = -static_cast<double>(k.k1) * c;
  }
  u.set_solenoidal(true);
  return u;
}

SpectralField random_vector_field(int K, std::uint64_t seed) {
  SpectralField u = SpectralField::vector(K);
  for (int c = 0; c < kDim; ++c) {
    for (std::size_t i = 0; i < u.modes_per_component(); ++i) {
      const WaveVector k = u.wave_vector(i);
      if (!upper_half(k) && k.norm_sq() != 0) continue;
      const double r = std::sqrt(mode_uniform(seed, k, 2 * c + 1));
      const double phase = kTwoPi * mode_uniform(seed, k, 2 * c + 2);
      u.component(c)[i] = std::polar(r, phase);
    }
  }
  u.symmetrize();
  return u;
}

std::function<double(double)> smooth_vorticity_profile(double k_peak, double cutoff) {
  if (k_peak <= 0.0) throw std::invalid_argument("k_peak must be positive");
  return [k_peak, cutoff](double k) {
    if (k > cutoff) return 0.0;
    const double r = k / k_peak;
    return k * std::exp(-r * r);
  };
}

std::function<double(double)> white_velocity_profile(double cutoff) {
  return [cutoff](double k) { return (k >= 1.0 && k <= cutoff) ? k : 0.0; };
}

double rms_velocity(const SpectralField& omega) {
  double sum = 0.0;
  const auto w = omega.component(0);
  for (std::size_t i = 0; i < w.size(); ++i) {
    const long q = omega.wave_vector(i).norm_sq();
    if (q != 0) sum += std::norm(w[i]) / static_cast<double>(q);
  }
  return std::sqrt(sum);
}

SpectralField with_rms_velocity(SpectralField omega, double u_rms) {
  const double current = rms_velocity(omega);
  if (current == 0.0) return omega;
  omega *= u_rms / current;
  return omega;
}

}  // namespace rdf
