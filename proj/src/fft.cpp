#include "fft.hpp"

#include <map>
#include <mutex>
#include <stdexcept>
#include <utility>

namespace rdf::detail {

namespace {

struct PlanPair {
  fftw_plan forward;
  fftw_plan inverse;
};

// FFTW_ESTIMATE keeps plan selection independent of timing, so repeated runs
// execute identical arithmetic.
PlanPair plans_for(int n) {
  static std::mutex mutex;
  static std::map<int, PlanPair> cache;
  std::lock_guard lock(mutex);
  if (auto it = cache.find(n); it != cache.end()) return it->second;

  const std::size_t real_size = static_cast<std::size_t>(n) * n;
  const std::size_t spectral_size = static_cast<std::size_t>(n) * (n / 2 + 1);
  FftBuffer<double> real(real_size);
  FftBuffer<Complex> spectral(spectral_size);
  auto* spec = reinterpret_cast<fftw_complex*>(spectral.data());
  PlanPair plans{
      fftw_plan_dft_r2c_2d(n, n, real.data(), spec, FFTW_ESTIMATE),
      fftw_plan_dft_c2r_2d(n, n, spec, real.data(), FFTW_ESTIMATE),
  };
  if (!plans.forward || !plans.inverse) throw std::runtime_error("FFTW planning failed");
  cache.emplace(n, plans);
  return plans;
}

}  // namespace

RealFft2d::RealFft2d(int n) : n_(n) {
  if (n < 2 || n % 2 != 0) throw std::invalid_argument("FFT grid size must be even and >= 2");
  auto plans = plans_for(n);
  forward_ = plans.forward;
  inverse_ = plans.inverse;
}

void RealFft2d::inverse(FftBuffer<Complex>& spectrum, FftBuffer<double>& out) const {
  fftw_execute_dft_c2r(inverse_, reinterpret_cast<fftw_complex*>(spectrum.data()), out.data());
}

void RealFft2d::forward(FftBuffer<double>& in, FftBuffer<Complex>& spectrum) const {
  fftw_execute_dft_r2c(forward_, in.data(), reinterpret_cast<fftw_complex*>(spectrum.data()));
}

void RealFft2d::pack(std::span<const Complex> coefficients, int K,
                     FftBuffer<Complex>& spectrum) const {
  pack_with(coefficients, K, spectrum, [](WaveVector) { return 1.0; });
}

void RealFft2d::unpack(const FftBuffer<Complex>& spectrum, int K,
                       std::span<Complex> coefficients) const {
  const std::size_t half = static_cast<std::size_t>(n_ / 2 + 1);
  const int side = 2 * K + 1;
  const double scale = 1.0 / (static_cast<double>(n_) * n_);
  auto idx = [&](int k1, int k2) {
    return static_cast<std::size_t>(k1 + K) * side + static_cast<std::size_t>(k2 + K);
  };
  for (int k1 = -K; k1 <= K; ++k1) {
    const std::size_t row = static_cast<std::size_t>(k1 < 0 ? k1 + n_ : k1) * half;
    for (int k2 = 1; k2 <= K; ++k2) {
      const Complex c = spectrum[row + k2] * scale;
      coefficients[idx(k1, k2)] = c;
      coefficients[idx(-k1, -k2)] = std::conj(c);
    }
  }
  // k2 = 0 column: take k1 >= 0 and mirror.
  coefficients[idx(0, 0)] = Complex(spectrum[0].real() * scale, 0.0);
  for (int k1 = 1; k1 <= K; ++k1) {
    const Complex c = spectrum[static_cast<std::size_t>(k1) * half] * scale;
    coefficients[idx(k1, 0)] = c;
    coefficients[idx(-k1, 0)] = std::conj(c);
  }
}

}  // namespace rdf::detail
