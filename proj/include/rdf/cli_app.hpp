#pragma once

// Command-line front end. Each subcommand reads a flat `key = value` config
// (a TOML subset), applies --seed and --override, validates every key against
// the subcommand's schema and writes its outputs plus a manifest.toml echoing
// the fully resolved configuration into the output directory.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace rdf {

/// Bad configuration or input; maps to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace exit_code {
inline constexpr int kSuccess = 0;
inline constexpr int kFailure = 1;
inline constexpr int kConfigError = 2;
inline constexpr int kNumericalFailure = 3;
}  // namespace exit_code

/// Shortest decimal that reads back to the same double.
std::string format_double(double value);

/// Parses `key = value` lines. Blank lines and `#` comments are ignored,
/// string values may be double-quoted and `[a, b]` arrays become "a,b".
/// Tables and duplicate keys are rejected.
std::map<std::string, std::string> parse_config_text(const std::string& text);

struct ExperimentConfig {
  std::string command;
  std::map<std::string, std::string> values;  ///< includes "seed"
  std::filesystem::path out_dir;

  const std::string& text(const std::string& key) const;
  double number(const std::string& key) const;
  std::int64_t integer(const std::string& key) const;
  bool flag(const std::string& key) const;
  std::vector<double> numbers(const std::string& key) const;
  std::vector<std::string> list(const std::string& key) const;
  std::uint64_t seed() const;
};

/// Subcommands: simulate, tangent, theorem-scan, oracle, sweep-re, fit.
std::vector<std::string> command_names();
/// Default values of every key a subcommand accepts.
const std::map<std::string, std::string>& command_defaults(const std::string& command);

/// Merges defaults, config-file values and overrides (in that order). Throws
/// ConfigError naming any unknown key together with the valid ones.
ExperimentConfig resolve_config(const std::string& command,
                                const std::map<std::string, std::string>& file_values,
                                const std::vector<std::string>& overrides,
                                const std::filesystem::path& out_dir);

/// TOML text echoing the resolved configuration; feeding it back through
/// --config reproduces the run.
std::string manifest_text(const ExperimentConfig& config);

/// Runs one subcommand and writes its outputs. Returns an exit code;
/// diagnostics go to `log`.
int run_command(const ExperimentConfig& config, std::ostream& log);

/// Full command line entry point.
int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace rdf
