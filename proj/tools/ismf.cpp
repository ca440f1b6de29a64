#include <iostream>

#include "CLI11.hpp"
#include "ismf/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Incompressible Schroedinger map flow solvers and estimate checks"};
  app.require_subcommand(1);
  ismf::CliOptions opts;
  opts.log = ismf::log_level_from_env();
  std::string config, out;

  auto add_common = [&](CLI::App* sub, bool needs_config) {
    auto* c = sub->add_option("--config", config, "experiment config file");
    if (needs_config) c->required();
    sub->add_option("--out", out, "output directory (overrides output.dir)");
    sub->add_option("--jobs", opts.jobs, "parallel sub-runs for sweeps")->check(CLI::PositiveNumber);
    sub->add_option("--tol-override", opts.overrides, "KEY=VAL tolerance or config override (repeatable)");
  };
  auto* run = app.add_subcommand("run", "run one scheme and verify its estimates");
  auto* sweep = app.add_subcommand("sweep", "run the sweep lists and write a convergence table");
  auto* gauge = app.add_subcommand("gauge", "flow-map volume and material-derivative checks");
  auto* verify = app.add_subcommand("verify", "re-check an existing run directory");
  add_common(run, true);
  add_common(sweep, true);
  add_common(gauge, true);
  add_common(verify, false);
  verify->add_option("dir", out, "run directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : ismf::exit_config_error;
  }
  opts.config = config;
  if (!out.empty()) opts.out = out;

  if (*run) return ismf::cmd_run(opts, std::cout, std::cerr);
  if (*sweep) return ismf::cmd_sweep(opts, std::cout, std::cerr);
  if (*gauge) return ismf::cmd_gauge(opts, std::cout, std::cerr);
  return ismf::cmd_verify(opts, std::cout, std::cerr);
}
