#pragma once

// Truncated Fourier representation of fields on the periodic box [0, 2π]².
//
// A field is stored as the full (2K+1)² block of coefficients c_k,
// k = (k1, k2) with |k1|, |k2| <= K, for every component, so that
//
//     f(x) = Σ_k c_k e^{i k·x}.
//
// Storage is row-major with k1 as the outer index and k2 inner, which is
// also the on-disk checkpoint order. Real fields satisfy c_{-k} = conj(c_k).

#include <array>
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace rdf {

using Complex = std::complex<double>;

inline constexpr int kDim = 2;
inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;
/// Box measure (2π)^d used by every Sobolev norm in this library.
inline constexpr double kBoxMeasure = kTwoPi * kTwoPi;

struct WaveVector {
  int k1 = 0;
  int k2 = 0;

  int operator[](int axis) const { return axis == 0 ? k1 : k2; }
  long norm_sq() const { return static_cast<long>(k1) * k1 + static_cast<long>(k2) * k2; }
  WaveVector operator-() const { return {-k1, -k2}; }
  bool operator==(const WaveVector&) const = default;
};

using Vec2 = std::array<double, kDim>;

class SpectralField {
 public:
  enum class Kind { Scalar, Vector };

  SpectralField() = default;
  SpectralField(int truncation, Kind kind);

  static SpectralField scalar(int truncation) { return {truncation, Kind::Scalar}; }
  static SpectralField vector(int truncation) { return {truncation, Kind::Vector}; }

  int truncation() const { return K_; }
  int side() const { return 2 * K_ + 1; }
  Kind kind() const { return kind_; }
  int components() const { return kind_ == Kind::Scalar ? 1 : kDim; }
  std::size_t modes_per_component() const { return static_cast<std::size_t>(side()) * side(); }

  bool contains(WaveVector k) const {
    return k.k1 >= -K_ && k.k1 <= K_ && k.k2 >= -K_ && k.k2 <= K_;
  }
  std::size_t index(WaveVector k) const {
    return static_cast<std::size_t>(k.k1 + K_) * side() + static_cast<std::size_t>(k.k2 + K_);
  }
  WaveVector wave_vector(std::size_t idx) const {
    return {static_cast<int>(idx / side()) - K_, static_cast<int>(idx % side()) - K_};
  }

  Complex& at(int component, WaveVector k) { return data_[offset(component) + index(k)]; }
  const Complex& at(int component, WaveVector k) const { return data_[offset(component) + index(k)]; }
  Complex& operator()(WaveVector k) { return at(0, k); }
  const Complex& operator()(WaveVector k) const { return at(0, k); }

  std::span<Complex> component(int c) { return {data_.data() + offset(c), modes_per_component()}; }
  std::span<const Complex> component(int c) const {
    return {data_.data() + offset(c), modes_per_component()};
  }
  std::span<Complex> coefficients() { return data_; }
  std::span<const Complex> coefficients() const { return data_; }

  /// Set when the producer guarantees Σ_m k_m u_k^{(m)} = 0.
  bool solenoidal() const { return solenoidal_; }
  void set_solenoidal(bool flag) { solenoidal_ = flag; }

  /// Overwrites the lower half-plane with conjugates of the upper half-plane.
  void symmetrize();
  /// max_k |c_{-k} - conj(c_k)| over all components.
  double reality_defect() const;
  /// max_k |Σ_m k_m u_k^{(m)}| for vector fields.
  double divergence_defect() const;
  double max_abs() const;
  bool all_finite() const;

  SpectralField& operator+=(const SpectralField& other);
  SpectralField& operator-=(const SpectralField& other);
  SpectralField& operator*=(double s);
  /// this += s * other
  void axpy(double s, const SpectralField& other);

 private:
  std::size_t offset(int c) const { return static_cast<std::size_t>(c) * modes_per_component(); }
  void require_compatible(const SpectralField& other) const;

  int K_ = 0;
  Kind kind_ = Kind::Scalar;
  bool solenoidal_ = false;
  std::vector<Complex> data_;
};

SpectralField operator+(SpectralField a, const SpectralField& b);
SpectralField operator-(SpectralField a, const SpectralField& b);
SpectralField operator*(double s, SpectralField a);
double max_abs_difference(const SpectralField& a, const SpectralField& b);

/// Σ_{j=0}^{n} |k|^{2j}; equals 1 at k = 0.
double sobolev_weight(long k_norm_sq, int n);

/// ‖f‖_n = sqrt((2π)² Σ_k Σ_{j<=n} |k|^{2j} Σ_c |c_k^{(c)}|²).
double sobolev_norm(const SpectralField& field, int n);
double sobolev_norm_sq(const SpectralField& field, int n);
/// L² inner product (2π)² Σ_k Σ_c conj(a_k) b_k, real part.
double l2_inner(const SpectralField& a, const SpectralField& b);

/// Biot–Savart: ψ_k = ω_k/|k|², u = (∂₂ψ, -∂₁ψ). A constant mean flow may be
/// supplied for the k = 0 velocity mode; nonzero mean vorticity is rejected.
SpectralField velocity_from_vorticity(const SpectralField& omega, Vec2 mean_flow = {0.0, 0.0});
/// ω = ∂₁u₂ - ∂₂u₁.
SpectralField vorticity_of(const SpectralField& velocity);
/// Spectral partial derivative ∂/∂x_{axis} of every component.
SpectralField derivative(const SpectralField& field, int axis);
/// Divergence of a vector field as a scalar field.
SpectralField divergence(const SpectralField& velocity);

/// P g = g - k (k·g_k)/|k|²; the k = 0 mode passes through unchanged.
SpectralField leray_project(const SpectralField& g);

/// Dealiased coefficients of u·∇ω, truncated to the common truncation K.
SpectralField nonlinear_term(const SpectralField& omega, const SpectralField& velocity);
/// Dealiased coefficients of (u·∇)u for a vector field u.
SpectralField advective_term(const SpectralField& velocity);

/// Coefficients of u(x - a t) + a.
SpectralField shift_and_boost(const SpectralField& velocity, Vec2 a, double t);

/// Real collocation grid of N×N points x_j = 2πj/N, row-major in x1 then x2.
struct GridValues {
  int n = 0;
  int components = 1;
  std::vector<double> values;

  double& at(int c, int j1, int j2) {
    return values[(static_cast<std::size_t>(c) * n + j1) * n + j2];
  }
  double at(int c, int j1, int j2) const {
    return values[(static_cast<std::size_t>(c) * n + j1) * n + j2];
  }
  std::span<const double> component(int c) const {
    return {values.data() + static_cast<std::size_t>(c) * n * n, static_cast<std::size_t>(n) * n};
  }
};

/// Smallest grid size accepted for truncation K.
inline int minimum_grid_size(int K) { return 2 * K + 2; }
/// Grid size used for alias-free quadratic products of truncation-K fields.
int dealiased_grid_size(int K);

GridValues grid_evaluate(const SpectralField& field, int grid_size);
SpectralField grid_analyze(const GridValues& grid, int truncation);

/// (2π/N)² Σ_j Σ_c |f_c(x_j)|².
double grid_l2_norm_sq(const GridValues& grid);

}  // namespace rdf
