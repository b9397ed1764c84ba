#include "advection.hpp"

#include <stdexcept>

namespace rdf::detail {

AdvectionWorkspace::AdvectionWorkspace(int truncation, int grid_size)
    : K_(truncation), fft_(grid_size), spectrum_(fft_.make_spectral()), product_(fft_.make_real()) {
  if (grid_size < minimum_grid_size(truncation)) {
    throw std::invalid_argument("grid size too small for truncation");
  }
}

AdvectionGrids AdvectionWorkspace::make_grids() const {
  return {fft_.make_real(), fft_.make_real(), fft_.make_real(), fft_.make_real()};
}

void AdvectionWorkspace::synthesize(std::span<const Complex> coefficients, FftBuffer<double>& out) {
  fft_.pack(coefficients, K_, spectrum_);
  fft_.inverse(spectrum_, out);
}

void AdvectionWorkspace::analyze(FftBuffer<double>& product, std::span<Complex> out) {
  fft_.forward(product, spectrum_);
  fft_.unpack(spectrum_, K_, out);
}

void AdvectionWorkspace::load_vorticity(const SpectralField& omega, Vec2 mean_flow,
                                        AdvectionGrids& grids) {
  if (omega.truncation() != K_) throw std::invalid_argument("truncation mismatch");
  const auto coeffs = omega.component(0);
  const Complex I(0.0, 1.0);
  // u1 = i k2 ω/|k|², u2 = -i k1 ω/|k|²
  synthesize_with(coeffs, grids.u1, [&](WaveVector k) {
    const long q = k.norm_sq();
    return q == 0 ? Complex{} : I * (static_cast<double>(k.k2) / static_cast<double>(q));
  });
  synthesize_with(coeffs, grids.u2, [&](WaveVector k) {
    const long q = k.norm_sq();
    return q == 0 ? Complex{} : -I * (static_cast<double>(k.k1) / static_cast<double>(q));
  });
  synthesize_with(coeffs, grids.wx, [&](WaveVector k) { return I * static_cast<double>(k.k1); });
  synthesize_with(coeffs, grids.wy, [&](WaveVector k) { return I * static_cast<double>(k.k2); });
  if (mean_flow[0] != 0.0 || mean_flow[1] != 0.0) {
    const std::size_t n = fft_.real_size();
    for (std::size_t i = 0; i < n; ++i) {
      grids.u1[i] += mean_flow[0];
      grids.u2[i] += mean_flow[1];
    }
  }
}

void AdvectionWorkspace::vorticity_tendency(const AdvectionGrids& g, SpectralField& out) {
  const std::size_t n = fft_.real_size();
  for (std::size_t i = 0; i < n; ++i) {
    product_[i] = -(g.u1[i] * g.wx[i] + g.u2[i] * g.wy[i]);
  }
  analyze(product_, out.component(0));
  out(WaveVector{0, 0}) = Complex{};
}

void AdvectionWorkspace::tangent_tendency(const AdvectionGrids& base, const AdvectionGrids& d,
                                          SpectralField& out) {
  const std::size_t n = fft_.real_size();
  for (std::size_t i = 0; i < n; ++i) {
    product_[i] = -(base.u1[i] * d.wx[i] + base.u2[i] * d.wy[i] + d.u1[i] * base.wx[i] +
                    d.u2[i] * base.wy[i]);
  }
  analyze(product_, out.component(0));
  out(WaveVector{0, 0}) = Complex{};
}

}  // namespace rdf::detail
