#pragma once

// Seeded generators for band-limited test fields and simulation initial data.
// Phases are drawn per wave vector from a hash of (seed, k), so a field built
// at truncation K is the restriction of the same field built at any K' > K.

#include <cstdint>
#include <functional>

#include "rdf/spectral_core.hpp"

namespace rdf {

/// Uniform value in [0, 1) determined by (seed, k, stream).
double mode_uniform(std::uint64_t seed, WaveVector k, std::uint64_t stream = 0);

/// Zero-mean real scalar field with |c_k| = amplitude(|k|) and hashed phases.
SpectralField random_scalar(int K, std::uint64_t seed, const std::function<double(double)>& amplitude);

/// Divergence-free real velocity with |u_k| = amplitude(|k|), built from a
/// hashed streamfunction phase. The k = 0 mode is zero.
SpectralField random_solenoidal_velocity(int K, std::uint64_t seed,
                                         const std::function<double(double)>& amplitude);

/// Generic vector field with independent random coefficients in both
/// components (not divergence-free); coefficients uniform in the unit disc.
SpectralField random_vector_field(int K, std::uint64_t seed);

/// Amplitude profile |ω_k| ∝ |k| exp(-(|k|/k_peak)²), truncated at cutoff.
std::function<double(double)> smooth_vorticity_profile(double k_peak, double cutoff = 1e300);
/// Flat velocity spectrum |u_k| = 1 (so |ω_k| = |k|) for 1 <= |k| <= cutoff.
std::function<double(double)> white_velocity_profile(double cutoff);

/// Root-mean-square speed sqrt(Σ_k |u_k|²) of the velocity induced by ω.
double rms_velocity(const SpectralField& omega);
/// Returns ω scaled so the induced velocity has the requested rms speed.
SpectralField with_rms_velocity(SpectralField omega, double u_rms);

}  // namespace rdf
