#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "ismf/cli.hpp"
#include "ismf/config.hpp"
#include "ismf/field_io.hpp"

#if defined(__unix__) || defined(__APPLE__)
#include <sys/wait.h>
#endif

using namespace ismf;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("ismf_unit_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

fs::path write_config(const fs::path& dir, const std::string& text) {
  const fs::path p = dir / "run.cfg";
  std::ofstream(p) << text;
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

const char* kParabolic = R"(# small parabolic run
[run]
scheme = parabolic
[grid]
extents = 1,1
cells = 16,16
[initial]
preset = tilted-cosine(0.8,1)
[velocity]
preset = psi-sine(1,1)
[solver]
epsilon = 0.25
dt = 5e-4
t_end = 0.02
[output]
snapshots = 0.01
)";

CliOptions options(const fs::path& cfg, const fs::path& out) {
  CliOptions o;
  o.config = cfg;
  o.out = out;
  o.log = LogLevel::quiet;
  return o;
}

ConfigFile parse_text(const std::string& text) {
  std::istringstream is(text);
  return ConfigFile::parse(is);
}

}  // namespace

TEST_CASE("config parsing") {
  const ConfigFile f = parse_text("# c\n[solver]\nepsilon = 0.5  # trailing\n[grid]\ncells = 8, 8\n");
  CHECK(f.get_double("solver.epsilon") == 0.5);
  CHECK(f.get_ints("grid.cells") == std::vector<int>{8, 8});
  CHECK_THROWS_AS(parse_text("[solver]\nepsilon\n"), ConfigError);
  CHECK_THROWS_AS(parse_run_config(parse_text("[run]\nscheme = galerkin\n")), ConfigError);
  ConfigFile file = parse_text(kParabolic);
  apply_override(file, "envelope=2e-3");
  CHECK(parse_run_config(file).tol.envelope == 2e-3);
  apply_override(file, "nonsense=1");
  CHECK_THROWS_AS(parse_run_config(file), ConfigError);
}

TEST_CASE("a constant initial field runs clean") {
  const fs::path dir = scratch("constant");
  std::string text = kParabolic;
  text.replace(text.find("tilted-cosine(0.8,1)"), 20, "constant(z)");
  const fs::path cfg = write_config(dir, text);
  std::ostringstream out, err;
  CHECK(cmd_run(options(cfg, dir / "out"), out, err) == exit_ok);
  CHECK(out.str().find("FAIL") == std::string::npos);
  CHECK(out.str().find("PASS G-bound-4.5") != std::string::npos);
  CHECK(fs::exists(dir / "out" / "timeseries.csv"));
  CHECK(fs::exists(dir / "out" / "u_0000.ismf"));
  CHECK(slurp(dir / "out" / "summary.txt").find("STATUS ok") != std::string::npos);
}

TEST_CASE("a missing epsilon is a config error naming the key") {
  const fs::path dir = scratch("missing");
  std::string text = kParabolic;
  text.erase(text.find("epsilon = 0.25\n"), 15);
  const fs::path cfg = write_config(dir, text);
  std::ostringstream out, err;
  CHECK(cmd_run(options(cfg, dir / "out"), out, err) == exit_config_error);
  CHECK(err.str().find("solver.epsilon") != std::string::npos);
}

TEST_CASE("unknown keys and presets are config errors") {
  const fs::path dir = scratch("unknown");
  std::ostringstream out, err;
  CHECK(cmd_run(options(write_config(dir, std::string(kParabolic) + "[solver]\nepsilom = 1\n"), dir / "o"), out, err) ==
        exit_config_error);
  CHECK(err.str().find("solver.epsilom") != std::string::npos);
  std::string text = kParabolic;
  text.replace(text.find("psi-sine(1,1)"), 13, "vortex(1)");
  CHECK(cmd_run(options(write_config(dir, text), dir / "o"), out, err) == exit_config_error);
}

TEST_CASE("a huge dt without the guard blows up with exit 3") {
  const fs::path dir = scratch("blowup");
  std::string text = kParabolic;
  text.replace(text.find("dt = 5e-4"), 9, "dt = 0.05\nenforce_guard = false");
  text.replace(text.find("t_end = 0.02"), 12, "t_end = 5");
  const fs::path cfg = write_config(dir, text);
  std::ostringstream out, err;
  CHECK(cmd_run(options(cfg, dir / "out"), out, err) == exit_blow_up);
  CHECK(out.str().find("last_valid_time=") != std::string::npos);
  CHECK(slurp(dir / "out" / "summary.txt").find("STATUS blow-up") != std::string::npos);
  // the stored run re-verifies to the same status
  CliOptions v = options(cfg, dir / "out");
  std::ostringstream vout, verr;
  CHECK(cmd_verify(v, vout, verr) == exit_blow_up);
}

TEST_CASE("identical configs give byte-identical outputs") {
  const fs::path dir = scratch("determinism");
  const fs::path cfg = write_config(dir, kParabolic);
  std::ostringstream out, err;
  REQUIRE(cmd_run(options(cfg, dir / "a"), out, err) == exit_ok);
  REQUIRE(cmd_run(options(cfg, dir / "b"), out, err) == exit_ok);
  for (const char* name : {"timeseries.csv", "report.csv", "summary.txt", "u_0001.ismf"}) {
    CHECK(slurp(dir / "a" / name) == slurp(dir / "b" / name));
  }
  std::ostringstream vout, verr;
  CHECK(cmd_verify(options(cfg, dir / "a"), vout, verr) == exit_ok);
  CHECK(vout.str().find("MISMATCH") == std::string::npos);
}

TEST_CASE("galerkin time series columns") {
  const fs::path dir = scratch("galerkin");
  const fs::path cfg = write_config(dir, R"([run]
scheme = galerkin
[grid]
extents = 1
cells = 32
[initial]
preset = tilted-cosine(0.5,1)
[solver]
epsilon = 0.1
modes = 8
dt = 1e-3
t_end = 0.05
)");
  std::ostringstream out, err;
  REQUIRE(cmd_run(options(cfg, dir / "out"), out, err) == exit_ok);
  std::ifstream is(dir / "out" / "timeseries.csv");
  std::string header;
  std::getline(is, header);
  CHECK(header.rfind("t,l2_sq,grad_l2_sq,sup_abs_u,diss_accum,h1_bound_envelope,pass_l2_law,pass_h1_bound", 0) == 0);
  CHECK(fs::exists(dir / "out" / "modes.csv"));
  std::ostringstream vout, verr;
  CHECK(cmd_verify(options(cfg, dir / "out"), vout, verr) == exit_ok);
}

TEST_CASE("a single-element sweep has one row and no ratios") {
  const fs::path dir = scratch("sweep");
  const fs::path cfg = write_config(dir, R"([run]
scheme = galerkin
[grid]
extents = 1
cells = 32
[initial]
preset = tilted-cosine(0.5,1)
[solver]
epsilon = 0.1
modes = 8
dt = 1e-3
t_end = 0.02
[sweep]
epsilon = 0.1
)");
  const RunConfig c = load_run_config(cfg, {});
  const SweepResult s = run_sweep(c, dir / "out", 2);
  REQUIRE(s.rows.size() == 1);
  CHECK_FALSE(s.rows[0].cauchy.has_value());
  CHECK_FALSE(s.rows[0].ratio.has_value());
  CHECK(s.exit_code == exit_ok);
}

TEST_CASE("gauge on a stored run passes and fails once the trajectory is tampered") {
  const fs::path dir = scratch("gauge");
  std::string text = kParabolic;
  text.replace(text.find("snapshots = 0.01"), 16,
               "snapshots = 0.005,0.01,0.015\ndump_fields = true");
  const fs::path run_cfg = write_config(dir, text);
  std::ostringstream out, err;
  REQUIRE(cmd_run(options(run_cfg, dir / "run"), out, err) == exit_ok);

  const fs::path gauge_cfg = dir / "gauge.cfg";
  std::ofstream(gauge_cfg) << text << "[gauge]\nrun_dir = run\nseeds = 9,9\ndt = 1e-3\n";
  std::ostringstream gout, gerr;
  CHECK(cmd_gauge(options(gauge_cfg, dir / "gauge"), gout, gerr) == exit_ok);
  CHECK(gout.str().find("PASS gauge-1.5:volume") != std::string::npos);
  CHECK(gout.str().find("PASS gauge-1.5:material") != std::string::npos);
  CHECK(fs::exists(dir / "gauge" / "flowmap.csv"));

  Field u = read_field(dir / "run" / "u_0002.ismf", {1.0, 1.0});
  for (double& x : u.values()) x = -x;
  write_field(dir / "run" / "u_0002.ismf", u);
  std::ostringstream tout, terr;
  CHECK(cmd_gauge(options(gauge_cfg, dir / "gauge2"), tout, terr) == exit_estimate_failure);
  CHECK(tout.str().find("FAIL gauge-1.5:material") != std::string::npos);
}

TEST_CASE("the command-line tool maps errors to exit codes") {
#if defined(__unix__) || defined(__APPLE__)
  const fs::path dir = scratch("process");
  const std::string missing = std::string(ISMF_CLI_PATH) + " run --config " + (dir / "none.cfg").string() + " > " +
                              (dir / "log.txt").string() + " 2>&1";
  const int status = std::system(missing.c_str());
  REQUIRE(WIFEXITED(status));
  CHECK(WEXITSTATUS(status) == 2);

  const std::string bad_flag = std::string(ISMF_CLI_PATH) + " run --bogus > " + (dir / "log.txt").string() + " 2>&1";
  const int status2 = std::system(bad_flag.c_str());
  REQUIRE(WIFEXITED(status2));
  CHECK(WEXITSTATUS(status2) == 2);

  const fs::path cfg = write_config(dir, kParabolic);
  const std::string ok = std::string(ISMF_CLI_PATH) + " run --config " + cfg.string() + " --out " +
                         (dir / "out").string() + " --tol-override envelope=2e-3 > " + (dir / "log.txt").string() +
                         " 2>&1";
  const int status3 = std::system(ok.c_str());
  REQUIRE(WIFEXITED(status3));
  CHECK(WEXITSTATUS(status3) == 0);
  CHECK(slurp(dir / "out" / "resolved.cfg").find("envelope") != std::string::npos);
#endif
}
