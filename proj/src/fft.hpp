#pragma once

// FFTW-backed real 2D transforms on an N×N grid. Plans are created once per
// grid size under a lock and executed through the new-array interface, so a
// single plan may be used concurrently from several threads.

#include <fftw3.h>

#include <algorithm>
#include <complex>
#include <cstddef>
#include <memory>
#include <span>

#include "rdf/spectral_core.hpp"

namespace rdf::detail {

struct FftwDeleter {
  void operator()(void* p) const { fftw_free(p); }
};

template <typename T>
class FftBuffer {
 public:
  FftBuffer() = default;
  explicit FftBuffer(std::size_t n)
      : size_(n), data_(static_cast<T*>(fftw_malloc(sizeof(T) * (n == 0 ? 1 : n)))) {
    if (!data_) throw std::bad_alloc();
  }
  T* data() { return data_.get(); }
  const T* data() const { return data_.get(); }
  std::size_t size() const { return size_; }
  std::span<T> span() { return {data_.get(), size_}; }
  std::span<const T> span() const { return {data_.get(), size_}; }
  T& operator[](std::size_t i) { return data_[i]; }
  const T& operator[](std::size_t i) const { return data_[i]; }

 private:
  std::size_t size_ = 0;
  std::unique_ptr<T[], FftwDeleter> data_;
};

class RealFft2d {
 public:
  explicit RealFft2d(int n);

  int size() const { return n_; }
  std::size_t real_size() const { return static_cast<std::size_t>(n_) * n_; }
  std::size_t spectral_size() const { return static_cast<std::size_t>(n_) * (n_ / 2 + 1); }

  FftBuffer<double> make_real() const { return FftBuffer<double>(real_size()); }
  FftBuffer<Complex> make_spectral() const { return FftBuffer<Complex>(spectral_size()); }

  /// Unnormalized synthesis Σ c e^{+ik·x}; the spectral buffer is overwritten.
  void inverse(FftBuffer<Complex>& spectrum, FftBuffer<double>& out) const;
  /// Unnormalized analysis Σ f e^{-ik·x}; the real buffer may be overwritten.
  void forward(FftBuffer<double>& in, FftBuffer<Complex>& spectrum) const;

  /// Writes one component of a truncation-K field into a zeroed half spectrum.
  void pack(std::span<const Complex> coefficients, int K, FftBuffer<Complex>& spectrum) const;
  /// Same, with each coefficient multiplied by a per-mode factor.
  template <typename Fn>
  void pack_with(std::span<const Complex> coefficients, int K, FftBuffer<Complex>& spectrum,
                 Fn&& factor) const;
  /// Reads modes |k_i| <= K out of a half spectrum, scaling by 1/N², and
  /// mirrors them into the full Hermitian block.
  void unpack(const FftBuffer<Complex>& spectrum, int K, std::span<Complex> coefficients) const;

 private:
  int n_;
  fftw_plan forward_ = nullptr;
  fftw_plan inverse_ = nullptr;
};

template <typename Fn>
void RealFft2d::pack_with(std::span<const Complex> coefficients, int K,
                          FftBuffer<Complex>& spectrum, Fn&& factor) const {
  const std::size_t half = static_cast<std::size_t>(n_ / 2 + 1);
  const int side = 2 * K + 1;
  std::fill(spectrum.data(), spectrum.data() + spectral_size(), Complex{});
  for (int k1 = -K; k1 <= K; ++k1) {
    const std::size_t row = static_cast<std::size_t>(k1 < 0 ? k1 + n_ : k1) * half;
    const std::size_t src = static_cast<std::size_t>(k1 + K) * side + K;
    for (int k2 = 0; k2 <= K; ++k2) {
      spectrum[row + k2] = factor(WaveVector{k1, k2}) * coefficients[src + k2];
    }
  }
}

}  // namespace rdf::detail
