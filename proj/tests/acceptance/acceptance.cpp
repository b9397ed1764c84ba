// Acceptance runner: one PASS/FAIL line per criterion. Tolerances and
// runtime budgets are pinned below. Pass criterion numbers as arguments to
// run a subset; the exit status is nonzero when any selected criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "rdf/analytic_oracles.hpp"
#include "rdf/growth_analysis.hpp"
#include "rdf/main_theorem.hpp"
#include "rdf/ns_solver.hpp"
#include "rdf/random_fields.hpp"
#include "rdf/tangent_solver.hpp"

using namespace rdf;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

double relative_error(double a, double b) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300});
}

SolverConfig solver(int K, Reynolds re, double dt, double t_end) {
  SolverConfig c;
  c.truncation = K;
  c.re = re;
  c.dt = dt;
  c.t_end = t_end;
  c.checkpoint_interval = 0;
  return c;
}

SpectralField normalized_h3(SpectralField w) {
  w *= 1.0 / perturbation_norm(w, 3);
  return w;
}

// 1. Closed-form total derivative norm equals the direct sum.
void closed_form_identity(Outcome& o) {
  constexpr double kTol = 1e-12;
  double worst = 0.0;
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    const SpectralField u = random_vector_field(16, seed);
    for (int n : {2, 3}) {
      for (double t : {0.0, 0.5, 1.0, 2.0}) {
        worst = std::max(worst, relative_error(translation_derivative_normsq_total(u, n, t),
                                               translation_derivative_normsq_direct(u, n, t)));
      }
    }
  }
  o.detail << "max relative error " << worst;
  o.require(worst < kTol, "relative error < 1e-12");
}

// 2. Borderline tail spectrum diverges logarithmically; the control converges.
void divergence_scan_check(Outcome& o) {
  const std::vector<int> ks{16, 32, 64, 128};
  TailSpectrumSpec spec;
  spec.decay = 5.0;  // n + 1 + d/2
  const auto border = divergence_scan(spec, 3, 1.0, ks);
  spec.decay = 6.0;  // n + 2 + d/2
  const auto control = divergence_scan(spec, 3, 1.0, ks);
  o.detail << "borderline ratios";
  for (std::size_t i = 2; i < border.size(); ++i) {
    const double r = border[i].norm_sq_increment_per_lnK / border[i - 1].norm_sq_increment_per_lnK;
    o.detail << ' ' << r;
    o.require(r >= 0.8 && r <= 1.2, "borderline ratio in [0.8, 1.2]");
  }
  o.detail << "; control ratios";
  for (std::size_t i = 2; i < control.size(); ++i) {
    const double r = control[i].norm_sq_increment_per_lnK / control[i - 1].norm_sq_increment_per_lnK;
    o.detail << ' ' << r;
    o.require(r <= 0.5, "control increment halves per octave");
  }
}

// 3. Nonlinear solver reproduces the exact family.
void exact_family_match(Outcome& o) {
  constexpr double kTol = 1e-8;
  const ExactFamilyParams p{1.0, 0.5, Reynolds::finite(100.0), 32};
  SolverConfig c = solver(64, p.re, 5e-4, 1.0);
  c.mean_flow = {0.0, p.sigma};
  const Trajectory tr = run(c, exact_family_vorticity(p, 0.0, 64));
  const double err = max_abs_difference(tr.checkpoints.back().omega, exact_family_vorticity(p, 1.0, 64));
  o.detail << "max coefficient error " << err;
  o.require(err < kTol, "error < 1e-8");
}

// 4. Lower bound on the σ-derivative norm, its pinned value, Re monotonicity
// and divergence at infinite Re.
void lower_bound_check(Outcome& o) {
  double min_margin = 1e300;
  for (double gamma : {0.6, 0.75, 1.0}) {
    for (double t : {0.25, 0.5, 1.0}) {
      double prev = 0.0;
      for (double re : {1e2, 1e3, 1e4}) {
        const auto norm = dsigma_h3_norm({gamma, 0.0, Reynolds::finite(re), 32}, t);
        const auto* f = std::get_if<FiniteNorm>(&norm);
        o.require(f != nullptr, "finite norm at finite Re");
        if (!f) continue;
        const double margin = f->value - exact_family_lower_bound(gamma, t, re);
        min_margin = std::min(min_margin, margin);
        o.require(margin > 0.0, "norm exceeds the lower bound");
        o.require(f->value >= prev, "nondecreasing in Re");
        prev = f->value;
      }
      o.require(std::holds_alternative<Divergent>(dsigma_h3_norm({gamma, 0.0, Reynolds::infinite(), 32}, t)),
                "divergent at infinite Re");
    }
  }
  const double pinned = exact_family_lower_bound(1.0, 1.0, 100.0);
  o.detail << "min margin " << min_margin << ", bound(1,1) " << pinned;
  o.require(std::abs(pinned - 6.34835) <= 1e-4, "bound(1,1) = 6.34835 +- 1e-4");
}

// 5. Couette oracle: viscous factor against an ODE, inviscid H0 conservation,
// and the t^k growth of H^k norms.
void couette_check(Outcome& o) {
  double ode_err = 0.0;
  for (int n = -3; n <= 3; ++n) {
    for (double xi : {-4.0, -1.5, 0.0, 0.7, 3.0}) {
      for (double re : {10.0, 100.0, 1000.0}) {
        const double T = 3.0;
        auto rate = [&](double t) { return (-xi * xi + 2.0 * n * t * xi - n * n * (t * t + 1.0)) / re; };
        const int steps = 6000;
        const double h = T / steps;
        double y = 1.0;
        for (int s = 0; s < steps; ++s) {
          const double t = s * h;
          const double k1 = rate(t) * y, k2 = rate(t + h / 2) * (y + h / 2 * k1);
          const double k3 = rate(t + h / 2) * (y + h / 2 * k2), k4 = rate(t + h) * (y + h * k3);
          y += h / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
        }
        ode_err = std::max(ode_err, std::abs(y - couette_viscous_factor(n, xi, T, re)));
      }
    }
  }
  o.require(ode_err < 1e-10, "viscous factor matches the ODE to 1e-10");

  const CouetteGrid grid{16, 256, 8.0};
  const auto f0 = [](double x1, double x2) { return std::sin(x1) * std::exp(-0.5 * x2 * x2); };
  const double h0 = quadrature_l2_norm_sq(sample_field(f0, grid));
  double drift = 0.0;
  for (double t : {1.0, 5.0, 20.0, 50.0}) {
    drift = std::max(drift, std::abs(quadrature_l2_norm_sq(couette_inviscid_evolve(f0, t, grid)) - h0));
  }
  o.require(drift < 1e-8, "inviscid H0 constant to 1e-8");

  const auto modes = couette_gaussian_modes(1, 1.0, 1.0, 12.0, 2001, -0.5 * kPi);
  o.detail << "ODE error " << ode_err << ", H0 drift " << drift << ", exponents";
  for (int k : {1, 2}) {
    std::vector<Sample> s;
    for (int i = 0; i < 46; ++i) {
      const double t = 5.0 + i;
      s.emplace_back(t, std::sqrt(couette_inviscid_hk_norm_sq(modes, t, k)));
    }
    const double p = fit_power(s).rate();
    o.detail << ' ' << p;
    o.require(std::abs(p - k) <= 0.05, "exponent within k +- 0.05");
  }
}

// 6. Quadratic remainder about the viscous trivial base, and growth of the
// Euler remainder with the perturbation's frequency content.
void differentiability_check(Outcome& o) {
  const int K = 32;
  const std::uint64_t seed = 7;
  {
    const BaseTrajectory base = BaseTrajectory::trivial(solver(K, Reynolds::finite(100.0), 0.01, 0.5));
    const SpectralField dir = normalized_h3(random_scalar(K, seed, smooth_vorticity_profile(3.0)));
    const auto table = remainder_experiment(base, dir, {1e-2, 1e-3, 1e-4}, 0.5, 3);
    double lo = 1e300, hi = 0.0;
    o.detail << "remainder/eps^2";
    for (const auto& r : table.rows) {
      o.require(!r.failed, "nonlinear run succeeded");
      lo = std::min(lo, r.remainder_over_eps2);
      hi = std::max(hi, r.remainder_over_eps2);
      o.detail << ' ' << r.remainder_over_eps2;
    }
    o.require(hi > 0.0 && (hi - lo) / hi < 0.10, "remainder/eps^2 varies < 10%");
  }
  {
    // Fixed smooth part plus a shell (κ/2, κ]; both halves share the seeded phases.
    const BaseTrajectory base = BaseTrajectory::trivial(solver(K, Reynolds::infinite(), 0.01, 0.5));
    const SpectralField low = normalized_h3(random_scalar(K, seed, smooth_vorticity_profile(2.0)));
    const auto white = white_velocity_profile(K);
    double prev = 0.0;
    o.detail << "; Euler by kappa";
    for (double kappa : {4.0, 8.0, 16.0}) {
      const SpectralField high = normalized_h3(random_scalar(
          K, seed, [&](double k) { return k > 0.5 * kappa && k <= kappa ? white(k) : 0.0; }));
      const SpectralField dir = normalized_h3(low + high);
      const auto table = remainder_experiment(base, dir, {1e-3}, 0.5, 3);
      const double v = table.rows.front().remainder_over_eps2;
      o.detail << ' ' << v;
      o.require(!table.rows.front().failed && v > prev, "strictly increasing in kappa");
      prev = v;
    }
  }
}

// 7. Fits recover synthetic rates.
void fit_recovery(Outcome& o) {
  for (double sigma : {21.2, 30.0}) {
    std::vector<Sample> s;
    for (int i = 1; i <= 50; ++i) {
      const double t = 0.02 * i;
      s.emplace_back(t, std::exp(sigma * std::sqrt(t)));
    }
    const double got = fit_sqrt_exponential(s).rate();
    o.detail << "sigma " << got << ' ';
    o.require(std::abs(got - sigma) < 1e-8, "sigma recovered to 1e-8");
  }
  std::vector<Sample> law;
  for (double re : {250.0, 500.0, 1000.0, 2000.0, 4000.0, 6210.0}) law.emplace_back(re, 0.37 * std::sqrt(re));
  const double p = fit_power(law).rate();
  o.detail << "power " << p;
  o.require(std::abs(p - 0.5) < 1e-8, "power exponent 0.5 recovered");
}

// 8. Qualitative growth on a random 2D base, over ten seeds.
void growth_reproduction(Outcome& o) {
  constexpr int kSeeds = 10, kRequired = 8;
  int passed = 0;
  for (std::uint64_t seed = 1; seed <= kSeeds; ++seed) {
    bool ok = true;
    GrowthRecipe r;
    r.truncation = 128;
    r.re = Reynolds::finite(1000.0);
    r.seed = seed;
    r.perturbation = PerturbationSpectrum::Smooth;
    r.norms = {3};
    const GrowthRun g = run_growth(r);
    std::vector<Sample> s;
    for (std::size_t i = 0; i < g.record.times.size(); ++i) s.emplace_back(g.record.times[i], g.record.lambda[0][i]);
    const double rss_sqrt = fit_sqrt_exponential(s).residual, rss_exp = fit_exponential(s).residual;
    ok = ok && rss_sqrt < rss_exp;
    const auto cal = calibrate_envelope(s, g.max_base_norm[0], r.re);
    ok = ok && cal.has_value() && std::isfinite(cal->c);

    GrowthRecipe w;
    w.truncation = 64;
    w.seed = seed;
    w.perturbation = PerturbationSpectrum::White;
    w.norms = {0};
    const SweepResult sweep = reynolds_sweep(w, {250.0, 500.0, 1000.0, 2000.0}, 0);
    const double p = sweep.fit.rate();
    ok = ok && sweep.monotone && p >= 0.2 && p <= 0.7;

    std::printf("  seed %llu: L3(tp) %.4g, rss sqrt %.3g vs exp %.3g, c %.3g, sweep exponent %.3f +- %.3f%s -> %s\n",
                static_cast<unsigned long long>(seed), s.back().second, rss_sqrt, rss_exp,
                cal ? cal->c : std::nan(""), p, sweep.exponent_ci95,
                sweep.monotone ? "" : " (not monotone)", ok ? "ok" : "miss");
    std::fflush(stdout);
    passed += ok;
  }
  o.detail << passed << "/" << kSeeds << " seeds";
  o.require(passed >= kRequired, "at least 8 of 10 seeds");
}

// 9. Inviscid invariants and temporal order.
void solver_floor(Outcome& o) {
  const SpectralField w0 = with_rms_velocity(random_scalar(64, 3, smooth_vorticity_profile(4.0)), 1.0);
  const double T = 1.0;
  const Trajectory tr = run(solver(64, Reynolds::infinite(), 1e-3, T), w0);
  const SpectralField& w1 = tr.checkpoints.back().omega;
  const auto energy = [](const SpectralField& w) { return sobolev_norm_sq(velocity_from_vorticity(w), 0); };
  const double e_drift = std::abs(energy(w1) / energy(w0) - 1.0) / T;
  const double z_drift = std::abs(sobolev_norm_sq(w1, 0) / sobolev_norm_sq(w0, 0) - 1.0) / T;
  o.require(e_drift < 1e-8, "energy drift < 1e-8 per unit time");
  o.require(z_drift < 1e-8, "enstrophy drift < 1e-8 per unit time");

  // ω = e^{-t/Re} sin(x2 - σt) under mean flow (0, σ).
  const double sigma = 2.0, re = 50.0;
  const auto wave = [](int K, double amplitude, double phase) {
    SpectralField w = SpectralField::scalar(K);
    w({0, 1}) = amplitude * std::polar(1.0, -phase) / Complex(0.0, 2.0);
    w({0, -1}) = std::conj(w({0, 1}));
    return w;
  };
  std::vector<double> errs;
  for (double dt : {0.1, 0.05, 0.025}) {
    SolverConfig c = solver(8, Reynolds::finite(re), dt, T);
    c.mean_flow = {0.0, sigma};
    const Trajectory d = run(c, wave(8, 1.0, 0.0));
    errs.push_back(max_abs_difference(d.checkpoints.back().omega, wave(8, std::exp(-T / re), sigma * T)));
  }
  const double order = std::log2(errs[1] / errs[2]);
  o.detail << "energy drift " << e_drift << ", enstrophy drift " << z_drift << ", order " << order;
  o.require(order >= 2.0 && std::log2(errs[0] / errs[1]) >= 2.0, "temporal order >= 2");
}

struct Criterion {
  int id;
  const char* name;
  double budget_seconds;
  std::function<void(Outcome&)> body;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> all{
      {1, "closed-form derivative norm identity", 10.0, closed_form_identity},
      {2, "log-divergence scan", 30.0, divergence_scan_check},
      {3, "exact family reproduction", 120.0, exact_family_match},
      {4, "sigma-derivative lower bound", 5.0, lower_bound_check},
      {5, "Couette oracle", 30.0, couette_check},
      {6, "differentiability and Euler roughness", 300.0, differentiability_check},
      {7, "fit recovery", 5.0, fit_recovery},
      {8, "2D growth reproduction", 1800.0, growth_reproduction},
      {9, "solver correctness floor", 60.0, solver_floor},
  };
  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) selected.push_back(std::atoi(argv[i]));

  int failures = 0;
  for (const auto& c : all) {
    if (!selected.empty() && std::find(selected.begin(), selected.end(), c.id) == selected.end()) continue;
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    try {
      c.body(o);
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::ostringstream budget;
    budget << "runtime " << secs << " s < " << c.budget_seconds << " s";
    o.require(secs < c.budget_seconds, budget.str());
    std::printf("criterion %d %s: %s (%s; %.1f s)\n", c.id, c.name, o.pass ? "PASS" : "FAIL",
                o.detail.str().c_str(), secs);
    std::fflush(stdout);
    failures += !o.pass;
  }
  return failures == 0 ? 0 : 1;
}
