#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ismf/config.hpp"

namespace ismf {

enum ExitCode : int { exit_ok = 0, exit_estimate_failure = 1, exit_config_error = 2, exit_blow_up = 3 };

enum class LogLevel { quiet, info, debug };

/// ISMF_LOG = quiet | info | debug (info when unset or unrecognized).
LogLevel log_level_from_env();

struct CliOptions {
  std::filesystem::path config;
  std::optional<std::filesystem::path> out;
  int jobs = 1;
  std::vector<std::string> overrides;
  LogLevel log = LogLevel::info;
};

/// Static preset or sampled trajectory ("t path" per line, paths relative
/// to the manifest). Throws ConfigError or AdmissibilityError.
VelocitySource make_velocity_source(const RunConfig& c, const Grid& g);

/// Everything one solver run produced.
struct RunOutcome {
  int exit_code = exit_ok;
  std::vector<double> snapshot_times;
  std::vector<Field> snapshots;
  EnergyReport report;
  std::optional<BlowUpInfo> blow_up;
  /// max(0, sup_{x,t} |u| - 1)
  double overshoot = 0.0;
  /// largest weak-form residual over the standard cosine test functions
  double weak_residual = 0.0;
};

/// Runs the configured scheme and writes resolved.cfg, timeseries.csv,
/// report.csv, summary.txt and (optionally) snapshot dumps listed in
/// snapshots.txt. Configuration and admissibility problems propagate as
/// exceptions; blow-up is reported through the outcome.
RunOutcome execute_run(const RunConfig& c, const std::filesystem::path& dir);

/// Weak residual maximized over cosine test functions with wavenumbers
/// (1,0,0) and (1,1,0) (2D and up) in every component.
double standard_weak_residual(const std::vector<double>& times, const std::vector<Field>& u,
                              const VelocitySource& v);

struct SweepRow {
  std::string parameter;
  double value = 0.0;
  std::size_t run = 0;
  std::optional<double> cauchy;  // sup_t ||u_this - u_next||_L2
  std::optional<double> ratio;   // previous cauchy / this cauchy
  double weak_residual = 0.0;
  double overshoot = 0.0;
  int exit_code = exit_ok;
};

struct SweepResult {
  std::vector<RunConfig> runs;
  std::vector<RunOutcome> outcomes;
  std::vector<SweepRow> rows;
  int exit_code = exit_ok;
  void write_csv(std::ostream& os) const;
};

/// Cross product of the sweep lists, sub-runs in dir/run_NNN, executed on
/// up to `jobs` threads. Rows chain each varying list in the given order.
SweepResult run_sweep(const RunConfig& c, const std::filesystem::path& dir, int jobs = 1);

int cmd_run(const CliOptions& o, std::ostream& out, std::ostream& err);
int cmd_sweep(const CliOptions& o, std::ostream& out, std::ostream& err);
int cmd_gauge(const CliOptions& o, std::ostream& out, std::ostream& err);
/// Re-checks a run directory from its stored series; `o.out` names the directory.
int cmd_verify(const CliOptions& o, std::ostream& out, std::ostream& err);

}  // namespace ismf
