#include "rdf/growth_analysis.hpp"

#include <boost/math/distributions/students_t.hpp>

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "rdf/random_fields.hpp"

namespace rdf {

namespace {

struct LineFit {
  double intercept = 0.0;
  double slope = 0.0;
  double rss = 0.0;
  double slope_stderr = 0.0;
};

// Ordinary least squares y = a + b x.
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  const auto n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (!(sxx > 1e-300 * std::max(1.0, mx * mx))) {
    throw std::invalid_argument("degenerate design: all abscissae are equal");
  }
  LineFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - f.intercept - f.slope * x[i];
    f.rss += r * r;
  }
  f.slope_stderr = x.size() > 2 ? std::sqrt(f.rss / (n - 2.0) / sxx)
                                : std::numeric_limits<double>::quiet_NaN();
  return f;
}

FitResult fit_time_model(GrowthModel model, const std::vector<Sample>& samples, FitOptions options,
                         double (*abscissa)(double)) {
  std::vector<double> x, y;
  for (const auto& [t, lambda] : samples) {
    if (!(t >= 0.0) || !std::isfinite(t)) throw std::invalid_argument("sample times must be >= 0");
    if (!(lambda > 0.0) || !std::isfinite(lambda)) {
      throw std::invalid_argument("amplification samples must be positive and finite");
    }
    if (t == 0.0 && !options.include_origin) continue;
    x.push_back(abscissa(t));
    y.push_back(std::log(lambda));
  }
  if (x.size() < 3) throw std::invalid_argument("at least 3 usable samples are required");
  const LineFit f = fit_line(x, y);
  return {model, {std::exp(f.intercept), f.slope}, f.rss, x.size(), f.slope_stderr};
}

}  // namespace

std::string to_string(GrowthModel model) {
  switch (model) {
    case GrowthModel::SqrtExp: return "sqrt_exp";
    case GrowthModel::Exp: return "exp";
    case GrowthModel::Power: return "power";
  }
  return "unknown";
}

GrowthModel parse_growth_model(const std::string& name) {
  if (name == "sqrt_exp") return GrowthModel::SqrtExp;
  if (name == "exp") return GrowthModel::Exp;
  if (name == "power") return GrowthModel::Power;
  throw std::invalid_argument("unknown model '" + name + "' (valid: sqrt_exp, exp, power)");
}

double FitResult::predict(double t) const {
  switch (model) {
    case GrowthModel::SqrtExp: return params[0] * std::exp(params[1] * std::sqrt(t));
    case GrowthModel::Exp: return params[0] * std::exp(params[1] * t);
    case GrowthModel::Power: return params[0] * std::pow(t, params[1]);
  }
  return std::numeric_limits<double>::quiet_NaN();
}

FitResult fit_sqrt_exponential(const std::vector<Sample>& samples, FitOptions options) {
  return fit_time_model(GrowthModel::SqrtExp, samples, options, [](double t) { return std::sqrt(t); });
}

FitResult fit_exponential(const std::vector<Sample>& samples, FitOptions options) {
  return fit_time_model(GrowthModel::Exp, samples, options, [](double t) { return t; });
}

FitResult fit_power(const std::vector<Sample>& samples) {
  std::vector<double> x, y;
  for (const auto& [a, b] : samples) {
    if (!(a > 0.0) || !(b > 0.0) || !std::isfinite(a) || !std::isfinite(b)) {
      throw std::invalid_argument("power fit needs positive finite data");
    }
    x.push_back(std::log(a));
    y.push_back(std::log(b));
  }
  if (x.size() < 3) throw std::invalid_argument("at least 3 samples are required");
  const LineFit f = fit_line(x, y);
  return {GrowthModel::Power, {std::exp(f.intercept), f.slope}, f.rss, x.size(), f.slope_stderr};
}

FitResult fit_model(GrowthModel model, const std::vector<Sample>& samples, FitOptions options) {
  switch (model) {
    case GrowthModel::SqrtExp: return fit_sqrt_exponential(samples, options);
    case GrowthModel::Exp: return fit_exponential(samples, options);
    case GrowthModel::Power: return fit_power(samples);
  }
  throw std::invalid_argument("unknown model");
}

std::pair<FitResult, FitResult> compare_models(const std::vector<Sample>& samples, FitOptions options) {
  FitResult s = fit_sqrt_exponential(samples, options);
  FitResult e = fit_exponential(samples, options);
  if (e.residual < s.residual) return {e, s};
  return {s, e};
}

// ---------------------------------------------------------------------------
// Envelope

namespace {
const double kSqrt2e = std::sqrt(2.0 * std::exp(1.0));

// log_bound = c · g(t)
double envelope_rate(double t, double max_base_norm, double re) {
  const double sigma_per_c = 8.0 / kSqrt2e * max_base_norm;
  return sigma_per_c * (std::sqrt(re) * std::sqrt(t) + 0.5 * kSqrt2e * t);
}
}  // namespace

double EnvelopeParams::sigma() const { return 8.0 * c / kSqrt2e * max_base_norm; }
double EnvelopeParams::sigma1() const { return 0.5 * kSqrt2e * sigma(); }

void EnvelopeParams::validate() const {
  if (!(c >= 0.0) || !std::isfinite(c)) throw std::invalid_argument("envelope constant c must be >= 0");
  if (!(max_base_norm >= 0.0) || !std::isfinite(max_base_norm)) {
    throw std::invalid_argument("max base norm must be >= 0");
  }
  if (re.is_infinite()) throw std::invalid_argument("envelope needs a finite Reynolds number");
}

std::vector<EnvelopeRow> envelope_check(const std::vector<Sample>& samples, const EnvelopeParams& env) {
  env.validate();
  std::vector<EnvelopeRow> rows;
  const double s = env.sigma(), s1 = env.sigma1(), sre = std::sqrt(env.re.value());
  for (const auto& [t, lambda] : samples) {
    if (!(t >= 0.0) || !(lambda > 0.0)) throw std::invalid_argument("bad envelope sample");
    EnvelopeRow r;
    r.t = t;
    r.log_lambda = std::log(lambda);
    r.log_bound = s * sre * std::sqrt(t) + s1 * t;
    r.margin = r.log_bound - r.log_lambda;
    rows.push_back(r);
  }
  return rows;
}

std::vector<EnvelopeRow> envelope_check(const GrowthRecord& record, int norm_index,
                                        const EnvelopeParams& env) {
  return envelope_check(record.series(norm_index), env);
}

bool envelope_holds(const std::vector<EnvelopeRow>& rows) {
  return std::all_of(rows.begin(), rows.end(), [](const EnvelopeRow& r) { return r.margin >= 0.0; });
}

std::optional<EnvelopeCalibration> calibrate_envelope(const std::vector<Sample>& samples,
                                                      double max_base_norm, const Reynolds& re,
                                                      double rel_tol) {
  EnvelopeParams env{0.0, max_base_norm, re};
  env.validate();
  if (!(max_base_norm > 0.0)) throw std::invalid_argument("max base norm must be positive");

  EnvelopeCalibration cal;
  for (const auto& [t, lambda] : samples) {
    const double l = std::log(lambda);
    if (t == 0.0) {
      if (l > 0.0) return std::nullopt;
      continue;
    }
    cal.closed_form = std::max(cal.closed_form, l / envelope_rate(t, max_base_norm, re.value()));
  }
  auto holds = [&](double c) {
    env.c = c;
    return envelope_holds(envelope_check(samples, env));
  };
  if (holds(0.0)) return cal;  // c = 0 already works; closed_form is 0 too

  double lo = 0.0, hi = 1.0;
  while (!holds(hi)) {
    lo = hi;
    hi *= 2.0;
    if (!std::isfinite(hi)) return std::nullopt;
  }
  while (hi - lo > rel_tol * hi) {
    const double mid = 0.5 * (lo + hi);
    (holds(mid) ? hi : lo) = mid;
    ++cal.iterations;
  }
  cal.c = hi;
  return cal;
}

// ---------------------------------------------------------------------------
// Recipes

std::string to_string(PerturbationSpectrum spectrum) {
  return spectrum == PerturbationSpectrum::Smooth ? "smooth" : "white";
}

PerturbationSpectrum parse_perturbation_spectrum(const std::string& name) {
  if (name == "smooth") return PerturbationSpectrum::Smooth;
  if (name == "white") return PerturbationSpectrum::White;
  throw std::invalid_argument("unknown perturbation spectrum '" + name + "' (valid: smooth, white)");
}

void GrowthRecipe::validate() const {
  if (truncation < 1) throw std::invalid_argument("truncation must be >= 1");
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
  if (!(base_k_peak > 0.0) || !(perturbation_k_peak > 0.0)) {
    throw std::invalid_argument("spectral peaks must be positive");
  }
  if (!(base_u_rms > 0.0)) throw std::invalid_argument("base rms speed must be positive");
  if (perturbation_cutoff < 0.0) throw std::invalid_argument("perturbation cutoff must be >= 0");
  if (!(probe_fraction > 0.0)) throw std::invalid_argument("probe fraction must be positive");
  if (turnover_override && !(*turnover_override > 0.0)) {
    throw std::invalid_argument("turnover override must be positive");
  }
  if (samples < 1) throw std::invalid_argument("need at least one sample");
  if (norms.empty()) throw std::invalid_argument("need at least one norm index");
}

SpectralField recipe_base_vorticity(const GrowthRecipe& r) {
  r.validate();
  return with_rms_velocity(random_scalar(r.truncation, r.seed, smooth_vorticity_profile(r.base_k_peak)),
                           r.base_u_rms);
}

SpectralField recipe_perturbation(const GrowthRecipe& r) {
  r.validate();
  // A distinct stream keeps the perturbation independent of the base.
  const std::uint64_t seed = r.seed ^ 0x9e3779b97f4a7c15ULL;
  if (r.perturbation == PerturbationSpectrum::Smooth) {
    return random_scalar(r.truncation, seed, smooth_vorticity_profile(r.perturbation_k_peak));
  }
  const double cutoff = r.perturbation_cutoff > 0.0 ? r.perturbation_cutoff : r.truncation;
  return random_scalar(r.truncation, seed, white_velocity_profile(cutoff));
}

double turnover_time(const SpectralField& omega) {
  const double u = rms_velocity(omega);
  if (!(u > 0.0)) throw std::invalid_argument("turnover time undefined for a motionless base");
  return kTwoPi / u;
}

GrowthRun run_growth(const GrowthRecipe& recipe) {
  recipe.validate();
  SpectralField omega0 = recipe_base_vorticity(recipe);
  GrowthRun out;
  out.turnover_time = recipe.turnover_override ? *recipe.turnover_override : turnover_time(omega0);
  const auto steps =
      std::max<std::int64_t>(1, std::llround(recipe.probe_fraction * out.turnover_time / recipe.dt));
  out.t_probe = static_cast<double>(steps) * recipe.dt;

  SolverConfig cfg;
  cfg.truncation = recipe.truncation;
  cfg.re = recipe.re;
  cfg.dt = recipe.dt;
  cfg.t_end = out.t_probe;
  cfg.checkpoint_interval = 0;
  const BaseTrajectory base =
      BaseTrajectory::from_initial(cfg, std::move(omega0), "seed-" + std::to_string(recipe.seed));

  const SpectralField dw0 = recipe_perturbation(recipe);
  std::vector<double> initial;
  for (int n : recipe.norms) initial.push_back(perturbation_norm(dw0, n));

  GrowthRecord& rec = out.record;
  rec.base_id = base.id();
  rec.re = recipe.re;
  rec.norm_indices = recipe.norms;
  rec.lambda.assign(recipe.norms.size(), {});
  out.max_base_norm.assign(recipe.norms.size(), 0.0);

  TangentIntegrator integ(base, dw0, 0.0);
  for (int i = 0; i <= recipe.samples; ++i) {
    const std::int64_t target = steps * i / recipe.samples;
    while (integ.step() < target) integ.advance();
    rec.times.push_back(integ.t());
    for (std::size_t j = 0; j < recipe.norms.size(); ++j) {
      rec.lambda[j].push_back(perturbation_norm(integ.perturbation(), recipe.norms[j]) / initial[j]);
      out.max_base_norm[j] = std::max(out.max_base_norm[j],
                                      perturbation_norm(integ.base_vorticity(), recipe.norms[j]));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Sweeps

SweepResult reynolds_sweep(const std::vector<double>& re_list,
                           const std::function<double(double)>& amplification, int threads) {
  std::vector<double> res = re_list;
  std::sort(res.begin(), res.end());
  if (std::adjacent_find(res.begin(), res.end()) != res.end()) {
    throw std::invalid_argument("duplicate Reynolds numbers in sweep");
  }
  for (double re : res) {
    if (!(re > 0.0) || !std::isfinite(re)) {
      throw std::invalid_argument("sweep Reynolds numbers must be finite and positive");
    }
  }

  SweepResult out;
  out.rows.resize(res.size());
  std::size_t next = 0;
  std::mutex m;
  auto worker = [&] {
    for (;;) {
      std::size_t i;
      {
        std::lock_guard lock(m);
        if (next == res.size()) return;
        i = next++;
      }
      SweepRow& row = out.rows[i];
      row.re = res[i];
      try {
        row.amplification = amplification(res[i]);
        if (!(row.amplification > 0.0) || !std::isfinite(row.amplification)) {
          row.failed = true;
          row.note = "non-positive or non-finite amplification";
        }
      } catch (const NumericalFailure& e) {
        row.failed = true;
        row.note = std::string("numerical failure at t=") + std::to_string(e.time()) + ": " + e.what();
      }
      if (row.failed) row.amplification = std::numeric_limits<double>::quiet_NaN();
    }
  };
  const int n_threads = std::clamp<int>(threads, 1, static_cast<int>(res.size()));
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int i = 0; i < n_threads; ++i) pool.emplace_back(worker);
  }

  std::vector<Sample> survivors;
  for (const auto& row : out.rows) {
    if (!row.failed) survivors.emplace_back(row.re, row.amplification);
  }
  if (survivors.size() < 3) {
    throw std::runtime_error("reynolds sweep: fewer than 3 runs survived");
  }
  out.fit = fit_power(survivors);
  const double df = static_cast<double>(survivors.size()) - 2.0;
  const boost::math::students_t dist(df);
  out.exponent_ci95 = boost::math::quantile(boost::math::complement(dist, 0.025)) * out.fit.rate_stderr;
  out.monotone = true;
  for (std::size_t i = 1; i < survivors.size(); ++i) {
    if (!(survivors[i].second > survivors[i - 1].second)) out.monotone = false;
  }
  return out;
}

SweepResult reynolds_sweep(const GrowthRecipe& recipe, const std::vector<double>& re_list,
                           int norm_index, int threads) {
  recipe.validate();
  return reynolds_sweep(
      re_list,
      [&](double re) {
        GrowthRecipe r = recipe;
        r.re = Reynolds::finite(re);
        r.norms = {norm_index};
        r.samples = 1;
        return run_growth(r).record.lambda[0].back();
      },
      threads);
}

}  // namespace rdf
