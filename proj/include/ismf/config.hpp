#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ismf/estimates.hpp"
#include "ismf/flowmap.hpp"
#include "ismf/galerkin.hpp"
#include "ismf/parabolic.hpp"
#include "ismf/presets.hpp"

namespace ismf {

/// Flat "key = value" text with [section] headers and '#' comments. Keys
/// are stored as "section.key".
class ConfigFile {
 public:
  static ConfigFile parse(std::istream& is, const std::string& origin = "config");
  static ConfigFile load(const std::filesystem::path& path);

  bool has(const std::string& key) const { return values_.count(key) != 0; }
  /// Sets or replaces a value ("section.key").
  void set(const std::string& key, const std::string& value);

  std::string get_string(const std::string& key) const;
  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key) const;
  double get_double(const std::string& key, double fallback) const;
  int get_int(const std::string& key, int fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  std::vector<double> get_doubles(const std::string& key) const;
  std::vector<int> get_ints(const std::string& key) const;

  /// Throws ConfigError naming the first key that was never read.
  void reject_unused() const;
  const std::map<std::string, std::string>& values() const { return values_; }

 private:
  std::map<std::string, std::string> values_;
  mutable std::set<std::string> used_;
};

enum class Scheme { galerkin, parabolic };

struct SweepSpec {
  std::vector<double> epsilon;
  std::vector<int> modes;
  std::vector<int> cells;  // same count on every axis
  bool empty() const { return epsilon.empty() && modes.empty() && cells.empty(); }
};

struct GaugeSpec {
  std::vector<int> seeds;
  double gamma = 1.0;
  double dt = 1e-3;
  double sample_interval = 0.005;
  /// static velocity presets are re-sampled on a grid this many times finer for particle tracing
  int velocity_refine = 4;
  double satellite_fraction = 1e-4;
  Interpolation u_interpolation = Interpolation::multilinear;
  Interpolation v_interpolation = Interpolation::cubic;
  std::string run_dir;
};

/// Fully resolved experiment description.
struct RunConfig {
  Scheme scheme = Scheme::galerkin;
  std::vector<double> extents;
  std::vector<int> cells;
  std::string initial;
  std::optional<long long> seed;
  std::string velocity = "zero";
  std::string velocity_trajectory;
  double epsilon = 0.1;
  std::size_t modes = 16;
  double dt = 1e-3;
  double t_end = 1.0;
  double guard = 0.0;  // 0 = scheme default
  bool enforce_guard = true;
  Stepper stepper = Stepper::explicit_rk4;
  bool renormalize = true;
  int sample_every = 1;
  std::vector<double> snapshot_times;
  bool dump_fields = true;
  std::string out_dir = "ismf-out";
  Tolerances tol;
  SweepSpec sweep;
  GaugeSpec gauge;
  /// Directory of the config file, for relative trajectory paths.
  std::filesystem::path base_dir = ".";

  Grid grid() const;
  /// The initial preset with the run seed substituted for "random-smooth(modes)".
  std::string initial_preset() const;
  GalerkinConfig galerkin() const;
  ParabolicConfig parabolic() const;

  /// Writes a config that parses back to the same RunConfig.
  void write(std::ostream& os) const;
};

/// Typed view of a config file. Throws ConfigError naming the offending
/// key for missing, malformed or unknown entries.
RunConfig parse_run_config(const ConfigFile& file);
RunConfig load_run_config(const std::filesystem::path& path,
                          const std::vector<std::string>& overrides = {});

/// Applies "KEY=VAL"; a bare key is taken from the [tolerances] section.
void apply_override(ConfigFile& file, const std::string& assignment);

std::string to_string(Scheme s);
std::string to_string(Interpolation i);

}  // namespace ismf
