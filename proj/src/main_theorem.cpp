#include "rdf/main_theorem.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "rdf/random_fields.hpp"

namespace rdf {

SpectralField tail_spectrum_field(const TailSpectrumSpec& spec) {
  if (spec.decay <= 0.0) throw std::invalid_argument("tail spectrum decay must be positive");
  const double decay = spec.decay;
  const double amplitude = spec.amplitude;
  if (spec.profile == TailProfile::OnePlusK) {
    return random_solenoidal_velocity(spec.truncation, spec.seed, [=](double k) {
      return amplitude * std::pow(1.0 + k, -decay);
    });
  }
  return random_solenoidal_velocity(spec.truncation, spec.seed, [=](double k) {
    return amplitude * std::pow(1.0 + k * k, -0.5 * decay);
  });
}

SpectralField translation_derivative(const SpectralField& velocity, double t, int axis) {
  if (velocity.kind() != SpectralField::Kind::Vector) {
    throw std::invalid_argument("translation_derivative: expected a vector field");
  }
  if (axis < 0 || axis >= kDim) throw std::invalid_argument("translation_derivative: bad axis");
  SpectralField out = SpectralField::vector(velocity.truncation());
  for (int c = 0; c < kDim; ++c) {
    const auto src = velocity.component(c);
    auto dst = out.component(c);
    for (std::size_t i = 0; i < src.size(); ++i) {
      const WaveVector k = velocity.wave_vector(i);
      dst[i] = Complex(0.0, -static_cast<double>(k[axis]) * t) * src[i];
    }
  }
  out.at(axis, {0, 0}) = 1.0;
  out.set_solenoidal(velocity.solenoidal());
  return out;
}

double translation_derivative_normsq_total(const SpectralField& velocity, int n, double t) {
  return kDim * kBoxMeasure +
         t * t * (sobolev_norm_sq(velocity, n + 1) - sobolev_norm_sq(velocity, 0));
}

double translation_derivative_normsq_direct(const SpectralField& velocity, int n, double t) {
  double total = 0.0;
  for (int m = 0; m < kDim; ++m) total += sobolev_norm_sq(translation_derivative(velocity, t, m), n);
  return total;
}

std::vector<DivergenceScanRow> divergence_scan(const TailSpectrumSpec& spec, int n, double t,
                                               const std::vector<int>& truncations) {
  if (truncations.empty()) throw std::invalid_argument("divergence_scan: empty truncation list");
  for (std::size_t i = 0; i < truncations.size(); ++i) {
    if (truncations[i] < 1 || (i > 0 && truncations[i] <= truncations[i - 1])) {
      throw std::invalid_argument("divergence_scan: truncation list must be strictly increasing");
    }
  }
  std::vector<DivergenceScanRow> rows;
  double prev_sq = 0.0;
  for (std::size_t i = 0; i < truncations.size(); ++i) {
    TailSpectrumSpec s = spec;
    s.truncation = truncations[i];
    const SpectralField u = tail_spectrum_field(s);
    const double sq = translation_derivative_normsq_direct(u, n, t);
    DivergenceScanRow row{truncations[i], std::sqrt(sq), std::numeric_limits<double>::quiet_NaN()};
    if (i > 0) {
      row.norm_sq_increment_per_lnK =
          (sq - prev_sq) / (std::log(static_cast<double>(truncations[i])) -
                            std::log(static_cast<double>(truncations[i - 1])));
    }
    rows.push_back(row);
    prev_sq = sq;
  }
  return rows;
}

}  // namespace rdf
