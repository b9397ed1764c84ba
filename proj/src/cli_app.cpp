#include "rdf/cli_app.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <numbers>
#include <sstream>

#include "rdf/analytic_oracles.hpp"
#include "rdf/growth_analysis.hpp"
#include "rdf/main_theorem.hpp"
#include "rdf/ns_solver.hpp"
#include "rdf/random_fields.hpp"
#include "rdf/tangent_solver.hpp"

namespace fs = std::filesystem;

namespace rdf {

// ---------------------------------------------------------------------------
// Formatting and parsing helpers

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, end);
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

bool parse_number(const std::string& s, double& out) {
  const std::string t = trim(s);
  if (t == "inf" || t == "+inf") {
    out = std::numeric_limits<double>::infinity();
    return true;
  }
  if (t.empty()) return false;
  const char* first = t.data() + (t[0] == '+' ? 1 : 0);
  auto [ptr, ec] = std::from_chars(first, t.data() + t.size(), out);
  return ec == std::errc() && ptr == t.data() + t.size();
}

// Strips a trailing comment that is not inside a quoted string.
std::string strip_comment(const std::string& line) {
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') quoted = !quoted;
    if (line[i] == '#' && !quoted) return line.substr(0, i);
  }
  return line;
}

bool is_plain_literal(const std::string& v) {
  double d;
  return v == "true" || v == "false" || parse_number(v, d);
}

}  // namespace

std::map<std::string, std::string> parse_config_text(const std::string& text) {
  std::map<std::string, std::string> out;
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = trim(strip_comment(raw));
    if (line.empty()) continue;
    const auto where = " (line " + std::to_string(line_no) + ")";
    if (line.front() == '[') throw ConfigError("tables are not supported" + where);
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("expected key = value" + where);
    const std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError("empty key" + where);
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') {
      value = value.substr(1, value.size() - 2);
    } else if (value.size() >= 2 && value.front() == '[' && value.back() == ']') {
      std::string joined;
      for (auto item : split(value.substr(1, value.size() - 2), ',')) {
        if (item.size() >= 2 && item.front() == '"' && item.back() == '"') {
          item = item.substr(1, item.size() - 2);
        }
        joined += (joined.empty() ? "" : ",") + item;
      }
      value = joined;
    }
    if (!out.emplace(key, value).second) throw ConfigError("duplicate key '" + key + "'" + where);
  }
  return out;
}

// ---------------------------------------------------------------------------
// ExperimentConfig

const std::string& ExperimentConfig::text(const std::string& key) const {
  auto it = values.find(key);
  if (it == values.end()) throw ConfigError("missing configuration key '" + key + "'");
  return it->second;
}

double ExperimentConfig::number(const std::string& key) const {
  double v;
  if (!parse_number(text(key), v)) {
    throw ConfigError("key '" + key + "' must be a number, got '" + text(key) + "'");
  }
  return v;
}

std::int64_t ExperimentConfig::integer(const std::string& key) const {
  const double v = number(key);
  if (v != std::floor(v) || std::abs(v) > 9e15) {
    throw ConfigError("key '" + key + "' must be an integer, got '" + text(key) + "'");
  }
  return static_cast<std::int64_t>(v);
}

bool ExperimentConfig::flag(const std::string& key) const {
  const std::string& v = text(key);
  if (v == "true") return true;
  if (v == "false") return false;
  throw ConfigError("key '" + key + "' must be true or false, got '" + v + "'");
}

std::vector<double> ExperimentConfig::numbers(const std::string& key) const {
  std::vector<double> out;
  for (const auto& item : list(key)) {
    double v;
    if (!parse_number(item, v)) throw ConfigError("key '" + key + "' has non-numeric entry '" + item + "'");
    out.push_back(v);
  }
  return out;
}

std::vector<std::string> ExperimentConfig::list(const std::string& key) const {
  return split(text(key), ',');
}

std::uint64_t ExperimentConfig::seed() const {
  const std::string& s = text("seed");
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw ConfigError("seed must be an unsigned 64-bit integer, got '" + s + "'");
  }
  return v;
}

// ---------------------------------------------------------------------------
// Schemas

namespace {

using Schema = std::map<std::string, std::string>;

const std::map<std::string, Schema>& schemas() {
  static const std::map<std::string, Schema> s = {
      {"simulate",
       {{"seed", "1"},
        {"truncation", "32"},
        {"re", "100"},
        {"dt", "0.001"},
        {"t_end", "1"},
        {"dealias", "true"},
        {"checkpoint_interval", "100"},
        {"mean_flow_x", "0"},
        {"mean_flow_y", "0"},
        {"initial", "random"},
        {"initial_path", ""},
        {"k_peak", "4"},
        {"u_rms", "1"},
        {"gamma", "1"},
        {"sigma", "0.5"},
        {"n_trunc", "32"}}},
      {"tangent",
       {{"seed", "1"},
        {"truncation", "32"},
        {"re", "100"},
        {"dt", "0.001"},
        {"t_end", "1"},
        {"base", "trivial"},
        {"base_path", ""},
        {"k_peak", "4"},
        {"u_rms", "1"},
        {"perturbation", "smooth"},
        {"perturbation_k_peak", "4"},
        {"perturbation_cutoff", "0"},
        {"mode_k1", "1"},
        {"mode_k2", "0"},
        {"norms", "0,3"},
        {"samples", "20"},
        {"remainder", "false"},
        {"remainder_epsilons", "0.01,0.001,0.0001"},
        {"remainder_norm", "3"}}},
      {"theorem-scan",
       {{"seed", "1"},
        {"decay", "5"},
        {"profile", "bracket"},
        {"amplitude", "1"},
        {"n", "3"},
        {"t", "1"},
        {"truncations", "16,32,64,128"}}},
      {"oracle",
       {{"seed", "1"},
        {"name", "exact-family"},
        // trivial
        {"truncation", "8"},
        {"re", "100"},
        {"dt", "0.01"},
        {"t_end", "1"},
        {"mode_k1", "1"},
        {"mode_k2", "0"},
        {"samples", "10"},
        // couette
        {"couette_n", "1"},
        {"couette_amplitude", "1"},
        {"couette_width", "1"},
        {"couette_phase", format_double(-std::numbers::pi / 2)},
        {"xi_max", "12"},
        {"xi_points", "2001"},
        {"couette_k", "1,2"},
        {"t_min", "5"},
        {"t_max", "50"},
        {"t_count", "46"},
        // exact family
        {"gammas", "0.6,0.75,1"},
        {"times", "0.25,0.5,1"},
        {"res", "100,1000,10000,inf"}}},
      {"sweep-re",
       {{"seed", "1"},
        {"truncation", "64"},
        {"dt", "0.002"},
        {"res", "250,500,1000,2000"},
        {"base_k_peak", "4"},
        {"base_u_rms", "1"},
        {"perturbation", "white"},
        {"perturbation_k_peak", "4"},
        {"perturbation_cutoff", "0"},
        {"probe_fraction", "0.3"},
        {"turnover", "0"},
        {"norm", "0"},
        {"threads", "1"}}},
      {"fit",
       {{"seed", "1"},
        {"input", ""},
        {"model", "sqrt_exp"},
        {"x_column", ""},
        {"y_column", ""},
        {"include_origin", "false"},
        {"compare", "false"}}},
  };
  return s;
}

std::string join_keys(const Schema& schema) {
  std::string out;
  for (const auto& [k, v] : schema) out += (out.empty() ? "" : ", ") + k;
  return out;
}

}  // namespace

std::vector<std::string> command_names() {
  std::vector<std::string> out;
  for (const auto& [k, v] : schemas()) out.push_back(k);
  return out;
}

const std::map<std::string, std::string>& command_defaults(const std::string& command) {
  auto it = schemas().find(command);
  if (it == schemas().end()) throw ConfigError("unknown subcommand '" + command + "'");
  return it->second;
}

ExperimentConfig resolve_config(const std::string& command,
                                const std::map<std::string, std::string>& file_values,
                                const std::vector<std::string>& overrides, const fs::path& out_dir) {
  const Schema& schema = command_defaults(command);
  ExperimentConfig cfg{command, schema, out_dir};
  auto assign = [&](const std::string& key, const std::string& value, const char* origin) {
    if (key == "command") {
      if (value != command) {
        throw ConfigError(std::string(origin) + " was written for '" + value + "', not '" + command + "'");
      }
      return;
    }
    if (!schema.contains(key)) {
      throw ConfigError("unknown key '" + key + "' in " + origin + "; valid keys for " + command + ": " +
                        join_keys(schema));
    }
    cfg.values[key] = value;
  };
  for (const auto& [k, v] : file_values) assign(k, v, "config file");
  for (const auto& o : overrides) {
    const auto eq = o.find('=');
    if (eq == std::string::npos) throw ConfigError("override '" + o + "' is not key=value");
    std::string value = trim(o.substr(eq + 1));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') {
      value = value.substr(1, value.size() - 2);
    }
    assign(trim(o.substr(0, eq)), value, "override");
  }
  cfg.seed();  // validates early
  return cfg;
}

std::string manifest_text(const ExperimentConfig& config) {
  std::ostringstream out;
  out << "# resolved configuration; rerun with --config manifest.toml\n";
  out << "command = \"" << config.command << "\"\n";
  for (const auto& [k, v] : config.values) {
    out << k << " = ";
    if (is_plain_literal(v) && v != "inf" && v != "+inf") {
      out << v;
    } else {
      out << '"' << v << '"';
    }
    out << '\n';
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// Output helpers

namespace {

class CsvWriter {
 public:
  CsvWriter(const fs::path& path, const std::vector<std::string>& header) : out_(path) {
    if (!out_) throw std::runtime_error("cannot write " + path.string());
    row(header);
  }
  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << cells[i];
    out_ << '\n';
  }

 private:
  std::ofstream out_;
};

std::string fmt(double v) { return format_double(v); }
std::string fmt(std::int64_t v) { return std::to_string(v); }

std::string quote_csv(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

Reynolds reynolds_from(const ExperimentConfig& c, const std::string& key) {
  try {
    return Reynolds::parse(c.text(key));
  } catch (const std::invalid_argument& e) {
    throw ConfigError("key '" + key + "': " + e.what());
  }
}

int to_int(const ExperimentConfig& c, const std::string& key) {
  const auto v = c.integer(key);
  if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max()) {
    throw ConfigError("key '" + key + "' out of range");
  }
  return static_cast<int>(v);
}

SolverConfig solver_config(const ExperimentConfig& c) {
  SolverConfig s;
  s.truncation = to_int(c, "truncation");
  s.re = reynolds_from(c, "re");
  s.dt = c.number("dt");
  s.t_end = c.number("t_end");
  return s;
}

SpectralField single_mode(int K, int k1, int k2) {
  SpectralField w = SpectralField::scalar(K);
  const WaveVector k{k1, k2};
  if (k.norm_sq() == 0 || !w.contains(k)) throw ConfigError("perturbation mode outside 0 < |k|, |k_i| <= K");
  w(k) = 0.5;
  w(-k) = 0.5;
  return w;
}

void write_fit_json(const fs::path& path, const std::vector<FitResult>& fits, nlohmann::json extra = {}) {
  nlohmann::json j = extra.is_null() ? nlohmann::json::object() : extra;
  auto one = [](const FitResult& f) {
    return nlohmann::json{{"model", to_string(f.model)},
                          {"params", f.params},
                          {"residual", f.residual},
                          {"n_samples", f.samples}};
  };
  j.update(one(fits.front()));
  if (fits.size() > 1) {
    nlohmann::json ranking = nlohmann::json::array();
    for (const auto& f : fits) ranking.push_back(one(f));
    j["ranking"] = ranking;
  }
  write_text(path, j.dump(2) + "\n");
}

// ---------------------------------------------------------------------------
// simulate

int cmd_simulate(const ExperimentConfig& c, std::ostream& log) {
  SolverConfig s = solver_config(c);
  s.dealias = c.flag("dealias");
  s.checkpoint_interval = to_int(c, "checkpoint_interval");
  s.mean_flow = {c.number("mean_flow_x"), c.number("mean_flow_y")};

  const std::string initial = c.text("initial");
  SpectralField omega0;
  std::optional<ExactFamilyParams> family;
  if (initial == "random") {
    omega0 = with_rms_velocity(
        random_scalar(s.truncation, c.seed(), smooth_vorticity_profile(c.number("k_peak"))),
        c.number("u_rms"));
  } else if (initial == "exact-family") {
    family = ExactFamilyParams{c.number("gamma"), c.number("sigma"), s.re, to_int(c, "n_trunc")};
    if (s.mean_flow[0] != 0.0 || (s.mean_flow[1] != 0.0 && s.mean_flow[1] != family->sigma)) {
      throw ConfigError("initial = exact-family fixes the mean flow to (0, sigma)");
    }
    s.mean_flow = {0.0, family->sigma};
    omega0 = exact_family_vorticity(*family, 0.0, s.truncation);
  } else if (initial == "checkpoint") {
    const fs::path path = c.text("initial_path");
    if (path.empty()) throw ConfigError("initial = checkpoint requires initial_path");
    if (!fs::exists(path)) throw ConfigError("initial checkpoint not found: " + path.string());
    const Checkpoint ck = read_checkpoint(path);
    if (ck.omega.truncation() != s.truncation) {
      throw ConfigError("checkpoint truncation " + std::to_string(ck.omega.truncation()) +
                        " differs from truncation = " + std::to_string(s.truncation));
    }
    omega0 = ck.omega;
  } else {
    throw ConfigError("unknown initial '" + initial + "' (valid: random, exact-family, checkpoint)");
  }

  const Trajectory traj = run(s, omega0);
  for (const auto& w : traj.warnings) log << "warning: " << w << '\n';

  const fs::path ck_dir = c.out_dir / "checkpoints";
  fs::create_directories(ck_dir);
  std::vector<std::string> header{"step", "t", "energy", "enstrophy", "palinstrophy"};
  for (int n = 0; n <= 4; ++n) header.push_back("h" + std::to_string(n));
  if (family) header.push_back("oracle_max_error");
  CsvWriter csv(c.out_dir / "diagnostics.csv", header);
  for (const auto& st : traj.checkpoints) {
    std::ostringstream name;
    name << "step_" << std::setw(8) << std::setfill('0') << st.step_count << ".rdf";
    write_checkpoint(ck_dir / name.str(), {s.re, st.t, st.omega});
    const Diagnostics d = diagnostics(st, s.mean_flow);
    std::vector<std::string> row{fmt(st.step_count), fmt(st.t), fmt(d.energy), fmt(d.enstrophy),
                                 fmt(d.palinstrophy)};
    for (double v : d.sobolev) row.push_back(fmt(v));
    if (family) {
      row.push_back(fmt(max_abs_difference(st.omega, exact_family_vorticity(*family, st.t, s.truncation))));
    }
    csv.row(row);
  }
  log << "simulate: " << traj.checkpoints.size() << " checkpoints written to " << ck_dir.string() << '\n';
  return exit_code::kSuccess;
}

// ---------------------------------------------------------------------------
// tangent

int cmd_tangent(const ExperimentConfig& c, std::ostream& log) {
  SolverConfig s = solver_config(c);
  s.checkpoint_interval = 0;
  const std::string base_kind = c.text("base");
  std::optional<BaseTrajectory> base;
  if (base_kind == "trivial") {
    base = BaseTrajectory::trivial(s);
  } else if (base_kind == "random") {
    auto w = with_rms_velocity(
        random_scalar(s.truncation, c.seed(), smooth_vorticity_profile(c.number("k_peak"))),
        c.number("u_rms"));
    base = BaseTrajectory::from_initial(s, std::move(w), "random-" + std::to_string(c.seed()));
  } else if (base_kind == "checkpoint") {
    const fs::path path = c.text("base_path");
    if (path.empty()) throw ConfigError("base = checkpoint requires base_path");
    if (!fs::exists(path)) throw ConfigError("base trajectory file not found: " + path.string());
    Checkpoint ck = read_checkpoint(path);
    s.truncation = ck.omega.truncation();
    s.re = ck.re;
    base = BaseTrajectory::from_initial(s, std::move(ck.omega), path.filename().string());
  } else {
    throw ConfigError("unknown base '" + base_kind + "' (valid: trivial, random, checkpoint)");
  }

  const std::string pert = c.text("perturbation");
  SpectralField dw0;
  const std::uint64_t pseed = c.seed() ^ 0x9e3779b97f4a7c15ULL;
  if (pert == "smooth") {
    dw0 = random_scalar(s.truncation, pseed, smooth_vorticity_profile(c.number("perturbation_k_peak")));
  } else if (pert == "white") {
    const double cut = c.number("perturbation_cutoff");
    dw0 = random_scalar(s.truncation, pseed, white_velocity_profile(cut > 0.0 ? cut : s.truncation));
  } else if (pert == "mode") {
    dw0 = single_mode(s.truncation, to_int(c, "mode_k1"), to_int(c, "mode_k2"));
  } else {
    throw ConfigError("unknown perturbation '" + pert + "' (valid: smooth, white, mode)");
  }

  std::vector<int> norms;
  for (double v : c.numbers("norms")) norms.push_back(static_cast<int>(v));
  const int samples = to_int(c, "samples");
  if (samples < 1) throw ConfigError("samples must be >= 1");
  const std::int64_t steps = base->last_step();
  std::vector<double> times;
  for (int i = 0; i <= samples; ++i) times.push_back(static_cast<double>(steps * i / samples) * s.dt);

  const GrowthRecord rec = amplification_curve(*base, dw0, norms, times);
  std::vector<std::string> header{"t"};
  for (int n : norms) header.push_back("lambda_h" + std::to_string(n));
  CsvWriter csv(c.out_dir / "growth.csv", header);
  for (std::size_t i = 0; i < rec.times.size(); ++i) {
    std::vector<std::string> row{fmt(rec.times[i])};
    for (const auto& series : rec.lambda) row.push_back(fmt(series[i]));
    csv.row(row);
  }

  if (c.flag("remainder")) {
    const auto table = remainder_experiment(*base, dw0, c.numbers("remainder_epsilons"), base->t_end(),
                                            to_int(c, "remainder_norm"));
    CsvWriter rcsv(c.out_dir / "remainder.csv",
                   {"epsilon", "remainder_norm", "over_eps", "over_eps2", "failed", "note"});
    for (const auto& r : table.rows) {
      rcsv.row({fmt(r.epsilon), fmt(r.remainder_norm), fmt(r.remainder_over_eps),
                fmt(r.remainder_over_eps2), r.failed ? "true" : "false", quote_csv(r.note)});
    }
  }
  log << "tangent: base " << rec.base_id << ", " << rec.times.size() << " samples\n";
  return exit_code::kSuccess;
}

// ---------------------------------------------------------------------------
// theorem-scan

int cmd_theorem_scan(const ExperimentConfig& c, std::ostream& log) {
  TailSpectrumSpec spec;
  spec.decay = c.number("decay");
  spec.amplitude = c.number("amplitude");
  spec.seed = c.seed();
  const std::string profile = c.text("profile");
  if (profile == "bracket") {
    spec.profile = TailProfile::Bracket;
  } else if (profile == "one_plus_k") {
    spec.profile = TailProfile::OnePlusK;
  } else {
    throw ConfigError("unknown profile '" + profile + "' (valid: bracket, one_plus_k)");
  }
  std::vector<int> ks;
  for (double v : c.numbers("truncations")) ks.push_back(static_cast<int>(v));
  const auto rows = divergence_scan(spec, to_int(c, "n"), c.number("t"), ks);
  CsvWriter csv(c.out_dir / "scan.csv", {"K", "norm_total", "norm_sq_increment_per_lnK"});
  for (const auto& r : rows) {
    csv.row({std::to_string(r.truncation), fmt(r.norm_total), fmt(r.norm_sq_increment_per_lnK)});
  }
  log << "theorem-scan: " << rows.size() << " rows\n";
  return exit_code::kSuccess;
}

// ---------------------------------------------------------------------------
// oracle

int oracle_trivial(const ExperimentConfig& c, std::ostream& log) {
  SolverConfig s = solver_config(c);
  const BaseTrajectory base = BaseTrajectory::trivial(s);
  const int k1 = to_int(c, "mode_k1"), k2 = to_int(c, "mode_k2");
  const SpectralField dw0 = single_mode(s.truncation, k1, k2);
  const int samples = to_int(c, "samples");
  if (samples < 1) throw ConfigError("samples must be >= 1");
  std::vector<double> times;
  for (int i = 0; i <= samples; ++i) {
    times.push_back(static_cast<double>(base.last_step() * i / samples) * s.dt);
  }
  const GrowthRecord rec = amplification_curve(base, dw0, {0}, times);
  const double q = static_cast<double>(k1) * k1 + static_cast<double>(k2) * k2;
  CsvWriter csv(c.out_dir / "oracle_trivial.csv", {"t", "lambda_exact", "lambda_solver", "abs_error"});
  for (std::size_t i = 0; i < rec.times.size(); ++i) {
    const double exact = std::exp(-q * rec.times[i] * s.re.viscosity());
    csv.row({fmt(rec.times[i]), fmt(exact), fmt(rec.lambda[0][i]), fmt(std::abs(exact - rec.lambda[0][i]))});
  }
  log << "oracle trivial: " << rec.times.size() << " rows\n";
  return exit_code::kSuccess;
}

int oracle_couette(const ExperimentConfig& c, std::ostream& log) {
  const auto modes = couette_gaussian_modes(to_int(c, "couette_n"), c.number("couette_amplitude"),
                                            c.number("couette_width"), c.number("xi_max"),
                                            to_int(c, "xi_points"), c.number("couette_phase"));
  const Reynolds re = reynolds_from(c, "re");
  std::vector<int> ks;
  for (double v : c.numbers("couette_k")) ks.push_back(static_cast<int>(v));
  const double t0 = c.number("t_min"), t1 = c.number("t_max");
  const int nt = to_int(c, "t_count");
  if (nt < 3 || !(t1 > t0) || t0 < 0.0) throw ConfigError("need t_count >= 3 and 0 <= t_min < t_max");

  std::vector<std::string> header{"t", "h0_sq_inviscid", "h0_sq_viscous"};
  for (int k : ks) header.push_back("hk_norm_k" + std::to_string(k));
  CsvWriter csv(c.out_dir / "couette.csv", header);
  std::vector<std::vector<Sample>> series(ks.size());
  for (int i = 0; i < nt; ++i) {
    const double t = t0 + (t1 - t0) * i / (nt - 1);
    std::vector<std::string> row{fmt(t), fmt(couette_h0_norm_sq(modes, t, Reynolds::infinite())),
                                 fmt(couette_h0_norm_sq(modes, t, re))};
    for (std::size_t j = 0; j < ks.size(); ++j) {
      const double norm = std::sqrt(couette_inviscid_hk_norm_sq(modes, t, ks[j]));
      series[j].emplace_back(t, norm);
      row.push_back(fmt(norm));
    }
    csv.row(row);
  }
  CsvWriter fits(c.out_dir / "couette_fit.csv", {"k", "exponent", "residual"});
  for (std::size_t j = 0; j < ks.size(); ++j) {
    const FitResult f = fit_power(series[j]);
    fits.row({std::to_string(ks[j]), fmt(f.rate()), fmt(f.residual)});
  }
  log << "oracle couette: " << nt << " times\n";
  return exit_code::kSuccess;
}

int oracle_exact_family(const ExperimentConfig& c, std::ostream& log) {
  CsvWriter csv(c.out_dir / "exact_family.csv", {"gamma", "t", "re", "dsigma_h3", "lower_bound", "margin",
                                                 "remainder_bound", "terms", "status"});
  std::size_t rows = 0;
  for (double gamma : c.numbers("gammas")) {
    for (double t : c.numbers("times")) {
      for (const auto& re_text : c.list("res")) {
        Reynolds re = Reynolds::infinite();
        try {
          re = Reynolds::parse(re_text);
        } catch (const std::invalid_argument& e) {
          throw ConfigError("key 'res': " + std::string(e.what()));
        }
        ExactFamilyParams p{gamma, 0.0, re, 32};
        const SeriesNorm norm = dsigma_h3_norm(p, t);
        const double bound = (re.is_infinite() || t <= 0.0)
                                 ? std::numeric_limits<double>::quiet_NaN()
                                 : exact_family_lower_bound(gamma, t, re.value());
        if (const auto* f = std::get_if<FiniteNorm>(&norm)) {
          csv.row({fmt(gamma), fmt(t), re.to_string(), fmt(f->value), fmt(bound), fmt(f->value - bound),
                   fmt(f->remainder_bound), std::to_string(f->terms), "finite"});
        } else {
          csv.row({fmt(gamma), fmt(t), re.to_string(), "inf", fmt(bound), "inf", "nan", "0", "divergent"});
        }
        ++rows;
      }
    }
  }
  log << "oracle exact-family: " << rows << " rows\n";
  return exit_code::kSuccess;
}

int cmd_oracle(const ExperimentConfig& c, std::ostream& log) {
  const std::string name = c.text("name");
  if (name == "trivial") return oracle_trivial(c, log);
  if (name == "couette") return oracle_couette(c, log);
  if (name == "exact-family") return oracle_exact_family(c, log);
  throw ConfigError("unknown oracle '" + name + "' (valid: trivial, couette, exact-family)");
}

// ---------------------------------------------------------------------------
// sweep-re

int cmd_sweep_re(const ExperimentConfig& c, std::ostream& log) {
  GrowthRecipe r;
  r.truncation = to_int(c, "truncation");
  r.dt = c.number("dt");
  r.seed = c.seed();
  r.base_k_peak = c.number("base_k_peak");
  r.base_u_rms = c.number("base_u_rms");
  try {
    r.perturbation = parse_perturbation_spectrum(c.text("perturbation"));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  r.perturbation_k_peak = c.number("perturbation_k_peak");
  r.perturbation_cutoff = c.number("perturbation_cutoff");
  r.probe_fraction = c.number("probe_fraction");
  if (const double t0 = c.number("turnover"); t0 > 0.0) r.turnover_override = t0;
  const int norm = to_int(c, "norm");

  const SweepResult sweep = reynolds_sweep(r, c.numbers("res"), norm, to_int(c, "threads"));
  CsvWriter csv(c.out_dir / "sweep.csv", {"re", "amplification", "failed", "note"});
  for (const auto& row : sweep.rows) {
    csv.row({fmt(row.re), fmt(row.amplification), row.failed ? "true" : "false", quote_csv(row.note)});
  }
  write_fit_json(c.out_dir / "sweep_fit.json", {sweep.fit},
                 {{"exponent_ci95", sweep.exponent_ci95}, {"monotone", sweep.monotone}});
  log << "sweep-re: exponent " << format_double(sweep.fit.rate()) << " ± "
      << format_double(sweep.exponent_ci95) << '\n';
  return exit_code::kSuccess;
}

// ---------------------------------------------------------------------------
// fit

std::vector<Sample> read_samples(const fs::path& path, const std::string& xcol, const std::string& ycol) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read input CSV '" + path.string() + "'");
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("input CSV '" + path.string() + "' is empty");
  std::vector<std::string> header;
  {
    std::istringstream hs(line);
    std::string cell;
    while (std::getline(hs, cell, ',')) header.push_back(trim(cell));
  }
  auto column = [&](const std::string& name, std::size_t fallback) {
    if (name.empty()) {
      if (fallback >= header.size()) throw ConfigError("input CSV needs at least two columns");
      return fallback;
    }
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw ConfigError("input CSV has no column '" + name + "'");
    return static_cast<std::size_t>(it - header.begin());
  };
  const std::size_t ix = column(xcol, 0), iy = column(ycol, 1);
  std::vector<Sample> out;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    double x, y;
    if (std::max(ix, iy) >= cells.size() || !parse_number(cells[ix], x) || !parse_number(cells[iy], y)) {
      throw ConfigError("input CSV line " + std::to_string(line_no) + " is not numeric");
    }
    out.emplace_back(x, y);
  }
  if (out.empty()) throw ConfigError("input CSV '" + path.string() + "' has no data rows");
  return out;
}

int cmd_fit(const ExperimentConfig& c, std::ostream& log) {
  if (c.text("input").empty()) throw ConfigError("fit requires input = <csv path>");
  const auto samples = read_samples(c.text("input"), c.text("x_column"), c.text("y_column"));
  GrowthModel model;
  try {
    model = parse_growth_model(c.text("model"));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  const FitOptions opts{c.flag("include_origin")};
  std::vector<FitResult> fits;
  if (c.flag("compare") && model != GrowthModel::Power) {
    auto [best, other] = compare_models(samples, opts);
    fits = {best, other};
  } else {
    fits = {fit_model(model, samples, opts)};
  }
  write_fit_json(c.out_dir / "fit.json", fits);
  log << "fit: " << to_string(fits.front().model) << " rate " << format_double(fits.front().rate()) << '\n';
  return exit_code::kSuccess;
}

}  // namespace

// ---------------------------------------------------------------------------
// Dispatch

int run_command(const ExperimentConfig& config, std::ostream& log) {
  try {
    fs::create_directories(config.out_dir);
    write_text(config.out_dir / "manifest.toml", manifest_text(config));
    const std::string& cmd = config.command;
    if (cmd == "simulate") return cmd_simulate(config, log);
    if (cmd == "tangent") return cmd_tangent(config, log);
    if (cmd == "theorem-scan") return cmd_theorem_scan(config, log);
    if (cmd == "oracle") return cmd_oracle(config, log);
    if (cmd == "sweep-re") return cmd_sweep_re(config, log);
    if (cmd == "fit") return cmd_fit(config, log);
    throw ConfigError("unknown subcommand '" + cmd + "'");
  } catch (const ConfigError& e) {
    log << "config error: " << e.what() << '\n';
    return exit_code::kConfigError;
  } catch (const NumericalFailure& e) {
    log << "numerical failure at t=" << format_double(e.time()) << " (step " << e.step() << "): " << e.what()
        << '\n';
    return exit_code::kNumericalFailure;
  } catch (const std::invalid_argument& e) {
    log << "config error: " << e.what() << '\n';
    return exit_code::kConfigError;
  } catch (const std::out_of_range& e) {
    log << "config error: " << e.what() << '\n';
    return exit_code::kConfigError;
  } catch (const std::exception& e) {
    log << "error: " << e.what() << '\n';
    return exit_code::kFailure;
  }
}

int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Rough-dependence experiments for 2D Navier-Stokes", "rdf"};
  app.require_subcommand(1);
  struct Options {
    std::string config, out = "rdf_out", seed;
    std::vector<std::string> overrides;
  };
  std::map<std::string, Options> opts;
  for (const auto& name : command_names()) {
    auto* sub = app.add_subcommand(name);
    Options& o = opts[name];
    sub->add_option("--config", o.config, "key = value config file");
    sub->add_option("--out", o.out, "output directory")->capture_default_str();
    sub->add_option("--seed", o.seed, "random seed (u64)");
    sub->add_option("--override", o.overrides, "key=value, repeatable")->allow_extra_args(false);
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return exit_code::kSuccess;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return exit_code::kConfigError;
  }

  const std::string name = app.get_subcommands().front()->get_name();
  const Options& o = opts[name];
  try {
    std::map<std::string, std::string> file_values;
    if (!o.config.empty()) {
      std::ifstream in(o.config);
      if (!in) throw ConfigError("cannot read config file '" + o.config + "'");
      std::stringstream buf;
      buf << in.rdbuf();
      file_values = parse_config_text(buf.str());
    }
    std::vector<std::string> overrides = o.overrides;
    if (!o.seed.empty()) overrides.push_back("seed=" + o.seed);
    const ExperimentConfig cfg = resolve_config(name, file_values, overrides, o.out);
    return run_command(cfg, err);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return exit_code::kConfigError;
  }
}

}  // namespace rdf
