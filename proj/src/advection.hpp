#pragma once

// Reusable buffers for the pseudo-spectral advection products used by the
// solver, the tangent integrator and the free functions in spectral_core.

#include "fft.hpp"
#include "rdf/spectral_core.hpp"

namespace rdf::detail {

/// Physical-space values of u and ∇ω for one vorticity field.
struct AdvectionGrids {
  FftBuffer<double> u1, u2, wx, wy;
};

class AdvectionWorkspace {
 public:
  AdvectionWorkspace(int truncation, int grid_size);

  int truncation() const { return K_; }
  int grid_size() const { return fft_.size(); }

  AdvectionGrids make_grids() const;

  /// Fills u = Biot–Savart(ω) + mean_flow and ∇ω on the grid.
  void load_vorticity(const SpectralField& omega, Vec2 mean_flow, AdvectionGrids& grids);
  /// Synthesizes one component of a field (optionally times a per-mode factor).
  void synthesize(std::span<const Complex> coefficients, FftBuffer<double>& out);
  template <typename Fn>
  void synthesize_with(std::span<const Complex> coefficients, FftBuffer<double>& out, Fn&& factor) {
    fft_.pack_with(coefficients, K_, spectrum_, std::forward<Fn>(factor));
    fft_.inverse(spectrum_, out);
  }
  /// Analyzes a grid into truncation-K coefficients; `product` is clobbered.
  void analyze(FftBuffer<double>& product, std::span<Complex> out);

  /// Coefficients of -u·∇ω with the k = 0 mode set to zero.
  void vorticity_tendency(const AdvectionGrids& grids, SpectralField& out);
  /// Coefficients of -(u·∇dω + du·∇ω), k = 0 set to zero.
  void tangent_tendency(const AdvectionGrids& base, const AdvectionGrids& perturbation,
                        SpectralField& out);

 private:
  int K_;
  RealFft2d fft_;
  FftBuffer<Complex> spectrum_;
  FftBuffer<double> product_;
};

}  // namespace rdf::detail
