#include "ismf/cli.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "ismf/errors.hpp"
#include "ismf/field_io.hpp"

namespace ismf {

namespace fs = std::filesystem;

LogLevel log_level_from_env() {
  const char* v = std::getenv("ISMF_LOG");
  if (!v) return LogLevel::info;
  const std::string s(v);
  if (s == "quiet") return LogLevel::quiet;
  if (s == "debug") return LogLevel::debug;
  return LogLevel::info;
}

namespace {

struct Log {
  LogLevel level;
  std::ostream& err;
  void info(const std::string& msg) const {
    if (level != LogLevel::quiet) err << "[ismf] " << msg << '\n';
  }
  void debug(const std::string& msg) const {
    if (level == LogLevel::debug) err << "[ismf:debug] " << msg << '\n';
  }
};

std::ofstream open_out(const fs::path& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  return os;
}

/// name + first row of a CSV keyed by column.
std::map<std::string, std::vector<double>> read_csv_columns(const fs::path& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("", "cannot open " + path.string());
  std::string line;
  std::getline(is, line);
  std::vector<std::string> names;
  {
    std::istringstream hs(line);
    std::string name;
    while (std::getline(hs, name, ',')) names.push_back(name);
  }
  std::map<std::string, std::vector<double>> cols;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string cell;
    for (const auto& name : names) {
      if (!std::getline(ls, cell, ',')) throw ConfigError("", path.string() + ": short row");
      cols[name].push_back(std::strtod(cell.c_str(), nullptr));
    }
  }
  return cols;
}

const std::vector<double>& column(const std::map<std::string, std::vector<double>>& cols, const std::string& name) {
  const auto it = cols.find(name);
  if (it == cols.end()) throw ConfigError("", "timeseries.csv lacks column " + name);
  return it->second;
}

void read_snapshots(const fs::path& dir, const std::vector<double>& extents, std::vector<double>& times,
                    std::vector<Field>& fields) {
  std::ifstream is(dir / "snapshots.txt");
  if (!is) throw ConfigError("", "run directory " + dir.string() + " has no snapshots.txt");
  double t;
  std::string name;
  while (is >> t >> name) {
    times.push_back(t);
    fields.push_back(read_field(dir / name, extents));
  }
}

void write_weak_series(std::ostream& os, const WeakSeries& s, const EnergyReport& report) {
  const EstimateCheck* l2 = report.find("L2-law-3.3");
  const EstimateCheck* h1 = report.find("H1-gronwall-3.4");
  const auto l2_slack = l2 ? l2->slack() : std::vector<double>(s.t.size(), 0.0);
  const auto h1_slack = h1 ? h1->slack() : std::vector<double>(s.t.size(), 0.0);
  os << "t,l2_sq,grad_l2_sq,sup_abs_u,diss_accum,h1_bound_envelope,pass_l2_law,pass_h1_bound,"
        "lap_l2_sq,dtu_l2_sq\n"
     << std::setprecision(17);
  for (std::size_t i = 0; i < s.t.size(); ++i) {
    const double envelope = h1 ? h1->rhs[i] : 0.0;
    os << s.t[i] << ',' << s.l2_sq[i] << ',' << s.grad_l2_sq[i] << ',' << s.sup_abs[i] << ','
       << s.diss_accum[i] << ',' << envelope << ',' << (l2_slack[i] >= 0.0) << ',' << (h1_slack[i] >= 0.0)
       << ',' << s.lap_l2_sq[i] << ',' << s.dtu_l2_sq[i] << '\n';
  }
}

int classify(const std::exception_ptr& e, std::string& message) {
  try {
    std::rethrow_exception(e);
  } catch (const ConfigError& x) {
    message = std::string("config error: ") + x.what();
    return exit_config_error;
  } catch (const AdmissibilityError& x) {
    message = std::string("inadmissible velocity: ") + x.what();
    return exit_config_error;
  } catch (const DegenerateData& x) {
    message = std::string("degenerate data: ") + x.what();
    return exit_config_error;
  } catch (const InvalidArgument& x) {
    message = std::string("invalid setting: ") + x.what();
    return exit_config_error;
  } catch (const BlowUp& x) {
    message = std::string("blow-up: ") + x.what();
    return exit_blow_up;
  } catch (const SolverError& x) {
    message = std::string("solver failure: ") + x.what();
    return exit_blow_up;
  } catch (const ConfinementError& x) {
    message = std::string("confinement failure: ") + x.what();
    return exit_blow_up;
  } catch (const std::exception& x) {
    message = std::string("error: ") + x.what();
    return exit_config_error;
  }
}

template <typename Body>
int guarded(std::ostream& err, Body body) {
  try {
    return body();
  } catch (...) {
    std::string message;
    const int code = classify(std::current_exception(), message);
    err << message << '\n';
    return code;
  }
}

fs::path out_dir(const CliOptions& o, const RunConfig& c) { return o.out ? *o.out : fs::path(c.out_dir); }

}  // namespace

VelocitySource make_velocity_source(const RunConfig& c, const Grid& g) {
  if (c.velocity_trajectory.empty()) {
    if (parse_preset(c.velocity, "velocity.preset").name == "zero") return VelocitySource::zero(g);
    return VelocitySource::constant(make_velocity(c.velocity, g));
  }
  const fs::path manifest = fs::path(c.velocity_trajectory).is_absolute()
                                ? fs::path(c.velocity_trajectory)
                                : c.base_dir / c.velocity_trajectory;
  std::ifstream is(manifest);
  if (!is) throw ConfigError("velocity.trajectory", "cannot open " + manifest.string());
  std::vector<double> times;
  std::vector<Field> fields;
  std::string line;
  while (std::getline(is, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    double t;
    std::string name;
    if (!(ls >> t)) continue;
    if (!(ls >> name)) throw ConfigError("velocity.trajectory", "expected 't path' lines");
    Field v = read_field(manifest.parent_path() / name, c.extents);
    if (v.components() != g.dim()) {
      throw ConfigError("velocity.trajectory", name + " does not have one component per axis");
    }
    const auto cert = check_admissible(v, c.tol.div, c.tol.bc);
    if (!cert.pass()) {
      std::ostringstream os;
      os << "trajectory sample at t=" << t << " fails its certificate (max div " << cert.max_div
         << ", normal trace " << cert.max_normal_trace << ")";
      throw AdmissibilityError(os.str());
    }
    times.push_back(t);
    fields.push_back(std::move(v));
  }
  if (times.empty()) throw ConfigError("velocity.trajectory", "manifest lists no samples");
  return VelocitySource::trajectory(std::move(times), std::move(fields));
}

double standard_weak_residual(const std::vector<double>& times, const std::vector<Field>& u,
                              const VelocitySource& v) {
  if (times.size() < 2) return 0.0;
  std::vector<std::array<int, 3>> ks{{1, 0, 0}};
  if (u.front().grid().dim() >= 2) ks.push_back({1, 1, 0});
  double worst = 0.0;
  for (const auto& k : ks) {
    for (int c = 0; c < 3; ++c) {
      CosineTestFunction phi;
      phi.k = k;
      phi.component = c;
      worst = std::max(worst, weak_form_residual(times, u, v, phi));
    }
  }
  return worst;
}

RunOutcome execute_run(const RunConfig& c, const fs::path& dir) {
  fs::create_directories(dir);
  {
    RunConfig resolved = c;
    resolved.out_dir = dir.string();
    auto os = open_out(dir / "resolved.cfg");
    resolved.write(os);
  }
  const Grid g = c.grid();
  const SpinField u0 = make_initial_data(c.initial_preset(), g);
  const VelocitySource v = make_velocity_source(c, g);

  RunOutcome out;
  if (c.scheme == Scheme::galerkin) {
    try {
      GalerkinResult r = run_galerkin(u0, v, c.galerkin(), c.tol);
      auto ts = open_out(dir / "timeseries.csv");
      write_weak_series(ts, r.series, r.report);
      double sup = 0.0;
      for (double s : r.series.sup_abs) sup = std::max(sup, s);
      out.overshoot = std::max(0.0, sup - 1.0);
      out.snapshot_times = std::move(r.snapshot_times);
      out.snapshots = std::move(r.snapshots);
      out.report = std::move(r.report);
      auto modes = open_out(dir / "modes.csv");
      SpectralBasis(g, c.modes).write_csv(modes);
    } catch (const BlowUp& e) {
      out.blow_up = BlowUpInfo{e.what(), e.time(), e.last_valid_time()};
    }
  } else {
    ParabolicResult r = run_parabolic(u0, v, c.parabolic(), c.tol);
    auto ts = open_out(dir / "timeseries.csv");
    r.series.write_csv(ts);
    double sup = 0.0;
    for (const Field& u : r.snapshots) sup = std::max(sup, max_pointwise_norm(u));
    out.overshoot = std::max(0.0, sup - 1.0);
    out.snapshot_times = std::move(r.snapshot_times);
    out.snapshots = std::move(r.snapshots);
    out.report = std::move(r.report);
    out.blow_up = r.blow_up;
  }

  if (!out.blow_up) out.weak_residual = standard_weak_residual(out.snapshot_times, out.snapshots, v);
  {
    auto rep = open_out(dir / "report.csv");
    out.report.write_csv(rep);
  }
  if (c.dump_fields) {
    auto list = open_out(dir / "snapshots.txt");
    list << std::setprecision(17);
    for (std::size_t i = 0; i < out.snapshots.size(); ++i) {
      char name[32];
      std::snprintf(name, sizeof name, "u_%04zu.ismf", i);
      write_field(dir / name, out.snapshots[i]);
      list << out.snapshot_times[i] << ' ' << name << '\n';
    }
  }

  if (out.blow_up) {
    out.exit_code = exit_blow_up;
  } else {
    out.exit_code = out.report.all_hard_pass() ? exit_ok : exit_estimate_failure;
  }
  auto sum = open_out(dir / "summary.txt");
  out.report.write_summary(sum);
  sum << std::setprecision(6) << "CONST overshoot=" << out.overshoot << '\n'
      << "CONST weak_residual=" << out.weak_residual << '\n';
  if (out.blow_up) {
    sum << "STATUS blow-up t=" << out.blow_up->time << " last_valid_time=" << out.blow_up->last_valid_time << '\n';
  } else {
    sum << "STATUS " << (out.exit_code == exit_ok ? "ok" : "estimate-failure") << '\n';
  }
  return out;
}

void SweepResult::write_csv(std::ostream& os) const {
  os << "parameter,value,run,cauchy_sup_l2,ratio,weak_residual,overshoot,exit_code\n" << std::setprecision(17);
  for (const auto& r : rows) {
    os << r.parameter << ',' << r.value << ',' << r.run << ',';
    if (r.cauchy) os << *r.cauchy;
    os << ',';
    if (r.ratio) os << *r.ratio;
    os << ',' << r.weak_residual << ',' << r.overshoot << ',' << r.exit_code << '\n';
  }
}

SweepResult run_sweep(const RunConfig& c, const fs::path& dir, int jobs) {
  if (c.sweep.empty()) throw ConfigError("sweep", "no sweep lists given");
  const std::vector<double> eps = c.sweep.epsilon.empty() ? std::vector<double>{c.epsilon} : c.sweep.epsilon;
  const std::vector<int> modes =
      c.sweep.modes.empty() ? std::vector<int>{static_cast<int>(c.modes)} : c.sweep.modes;
  const std::vector<int> cells = c.sweep.cells.empty() ? std::vector<int>{c.cells[0]} : c.sweep.cells;
  const std::size_t ne = eps.size(), nm = modes.size(), nc = cells.size();
  auto index = [&](std::size_t ie, std::size_t im, std::size_t ic) { return (ie * nm + im) * nc + ic; };

  SweepResult result;
  for (std::size_t ie = 0; ie < ne; ++ie) {
    for (std::size_t im = 0; im < nm; ++im) {
      for (std::size_t ic = 0; ic < nc; ++ic) {
        RunConfig r = c;
        r.epsilon = eps[ie];
        r.modes = static_cast<std::size_t>(modes[im]);
        if (!c.sweep.cells.empty()) r.cells.assign(c.cells.size(), cells[ic]);
        r.sweep = {};
        result.runs.push_back(std::move(r));
      }
    }
  }
  const std::size_t n = result.runs.size();
  result.outcomes.resize(n);
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      char name[32];
      std::snprintf(name, sizeof name, "run_%03zu", i);
      try {
        result.outcomes[i] = execute_run(result.runs[i], dir / name);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const int threads = std::clamp(jobs, 1, static_cast<int>(n));
  std::vector<std::thread> pool;
  for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  bool config_error = false, blow_up = false, failure = false;
  for (std::size_t i = 0; i < n; ++i) {
    if (errors[i]) {
      std::string message;
      result.outcomes[i].exit_code = classify(errors[i], message);
    }
    const int code = result.outcomes[i].exit_code;
    config_error |= code == exit_config_error;
    blow_up |= code == exit_blow_up;
    failure |= code == exit_estimate_failure;
  }
  result.exit_code = config_error ? exit_config_error : blow_up ? exit_blow_up : failure ? exit_estimate_failure : exit_ok;
  for (std::size_t i = 0; i < n; ++i) {
    if (errors[i]) std::rethrow_exception(errors[i]);
  }

  struct Axis {
    std::string name;
    std::size_t size;
  };
  const std::vector<Axis> axes{{"epsilon", ne}, {"modes", nm}, {"cells", nc}};
  auto value_of = [&](int axis, std::size_t k) -> double {
    return axis == 0 ? eps[k] : axis == 1 ? modes[k] : cells[k];
  };
  auto add_chain = [&](int axis, const std::vector<std::size_t>& chain) {
    std::optional<double> previous;
    for (std::size_t k = 0; k < chain.size(); ++k) {
      const RunOutcome& o = result.outcomes[chain[k]];
      SweepRow row;
      row.parameter = axes[axis].name;
      row.value = value_of(axis, k);
      row.run = chain[k];
      row.weak_residual = o.weak_residual;
      row.overshoot = o.overshoot;
      row.exit_code = o.exit_code;
      if (k + 1 < chain.size()) {
        const RunOutcome& nx = result.outcomes[chain[k + 1]];
        if (!o.blow_up && !nx.blow_up) {
          row.cauchy = sup_l2_difference(o.snapshot_times, o.snapshots, nx.snapshot_times, nx.snapshots);
          if (previous && *row.cauchy > 0.0) row.ratio = *previous / *row.cauchy;
        }
      }
      previous = row.cauchy;
      result.rows.push_back(row);
    }
  };
  bool any_chain = false;
  for (int axis = 0; axis < 3; ++axis) {
    if (axes[axis].size < 2) continue;
    any_chain = true;
    const std::size_t o1 = axis == 0 ? nm : ne;
    const std::size_t o2 = axis == 2 ? nm : nc;
    for (std::size_t a = 0; a < o1; ++a) {
      for (std::size_t b = 0; b < o2; ++b) {
        std::vector<std::size_t> chain;
        for (std::size_t k = 0; k < axes[axis].size; ++k) {
          chain.push_back(axis == 0 ? index(k, a, b) : axis == 1 ? index(a, k, b) : index(a, b, k));
        }
        add_chain(axis, chain);
      }
    }
  }
  if (!any_chain) {
    const int axis = !c.sweep.epsilon.empty() ? 0 : !c.sweep.modes.empty() ? 1 : 2;
    add_chain(axis, {0});
  }
  return result;
}

int cmd_run(const CliOptions& o, std::ostream& out, std::ostream& err) {
  const Log log{o.log, err};
  return guarded(err, [&] {
    const RunConfig c = load_run_config(o.config, o.overrides);
    const fs::path dir = out_dir(o, c);
    log.info("running " + to_string(c.scheme) + " scheme into " + dir.string());
    const RunOutcome r = execute_run(c, dir);
    r.report.write_summary(out);
    if (r.blow_up) {
      err << "blow-up: " << r.blow_up->what << '\n';
      out << "STATUS blow-up last_valid_time=" << r.blow_up->last_valid_time << '\n';
    }
    log.debug("exit code " + std::to_string(r.exit_code));
    return r.exit_code;
  });
}

int cmd_sweep(const CliOptions& o, std::ostream& out, std::ostream& err) {
  const Log log{o.log, err};
  return guarded(err, [&] {
    const RunConfig c = load_run_config(o.config, o.overrides);
    const fs::path dir = out_dir(o, c);
    log.info("sweep into " + dir.string() + " on " + std::to_string(o.jobs) + " job(s)");
    const SweepResult s = run_sweep(c, dir, o.jobs);
    auto os = open_out(dir / "convergence.csv");
    s.write_csv(os);
    s.write_csv(out);
    return s.exit_code;
  });
}

int cmd_gauge(const CliOptions& o, std::ostream& out, std::ostream& err) {
  const Log log{o.log, err};
  return guarded(err, [&] {
    const RunConfig gc = load_run_config(o.config, o.overrides);
    const fs::path dir = out_dir(o, gc);
    RunConfig rc = gc;
    std::vector<double> times;
    std::vector<Field> u;
    if (gc.gauge.run_dir.empty()) {
      if (gc.scheme != Scheme::parabolic) throw ConfigError("run.scheme", "gauge needs the parabolic scheme");
      rc.snapshot_times.clear();
      for (int k = 1; k * gc.gauge.sample_interval < gc.t_end * (1.0 - 1e-9); ++k) {
        rc.snapshot_times.push_back(k * gc.gauge.sample_interval);
      }
      log.info("gauge: running the parabolic scheme into " + dir.string());
      RunOutcome r = execute_run(rc, dir);
      if (r.blow_up) {
        err << "blow-up: " << r.blow_up->what << '\n';
        return static_cast<int>(exit_blow_up);
      }
      times = std::move(r.snapshot_times);
      u = std::move(r.snapshots);
    } else {
      const fs::path run_dir = fs::path(gc.gauge.run_dir).is_absolute() ? fs::path(gc.gauge.run_dir)
                                                                          : gc.base_dir / gc.gauge.run_dir;
      rc = load_run_config(run_dir / "resolved.cfg");
      if (rc.scheme != Scheme::parabolic) throw ConfigError("gauge.run_dir", "run was not a parabolic run");
      read_snapshots(run_dir, rc.extents, times, u);
      if (times.size() < 3) throw ConfigError("gauge.run_dir", "need at least three snapshots");
      fs::create_directories(dir);
    }
    const Grid g = rc.grid();
    const VelocitySource v = make_velocity_source(rc, g);
    std::vector<Field> dtu;
    for (std::size_t k = 0; k < u.size(); ++k) dtu.push_back(parabolic_rhs(u[k], v.at(times[k]), rc.epsilon));

    const SeedLattice seeds = SeedLattice::regular(g, gc.gauge.seeds, gc.gauge.satellite_fraction);
    const std::vector<double> inner(times.begin() + 1, times.end() - 1);
    std::optional<VelocitySource> fine;
    if (rc.velocity_trajectory.empty() && gc.gauge.velocity_refine > 1 && !v.is_zero()) {
      std::vector<int> cells = rc.cells;
      for (int& n : cells) n *= gc.gauge.velocity_refine;
      fine = VelocitySource::constant(make_velocity(rc.velocity, Grid(rc.extents, cells)));
    }
    const FlowMap fm = integrate_flow(fine ? *fine : v, seeds, gc.gauge.gamma, times.back(), gc.gauge.dt, inner,
                                      gc.tol, gc.gauge.v_interpolation);
    double volume = 0.0, lattice = 0.0;
    for (double t : fm.times) {
      volume = std::max(volume, jacobian_det(fm, t).max_deviation());
      lattice = std::max(lattice, jacobian_det(fm, t, JacobianStencil::lattice2).max_deviation());
    }
    const GaugeResidual res = gauge_material_derivative_check(times, u, dtu, fm, v, gc.gauge.u_interpolation);
    {
      auto os = open_out(dir / "flowmap.csv");
      fm.write_csv(os);
    }
    {
      auto os = open_out(dir / "gauge_residual.csv");
      os << "t,max_residual,rms_residual\n" << std::setprecision(17);
      for (std::size_t i = 0; i < res.t.size(); ++i) {
        os << res.t[i] << ',' << res.max_residual[i] << ',' << res.rms_residual[i] << '\n';
      }
    }
    const bool volume_ok = volume <= gc.tol.volume;
    const bool residual_ok = res.relative() <= gc.tol.gauge_residual;
    std::ostringstream sum;
    sum << std::setprecision(6);
    sum << (volume_ok ? "PASS" : "FAIL") << " gauge-1.5:volume max_det_deviation=" << volume
        << " tol=" << gc.tol.volume << '\n';
    sum << (residual_ok ? "PASS" : "FAIL") << " gauge-1.5:material relative_residual=" << res.relative()
        << " sup_residual=" << res.sup_max() << " scale=" << res.scale << " tol=" << gc.tol.gauge_residual << '\n';
    sum << "INFO gauge-1.5:lattice-det max_det_deviation=" << lattice << '\n';
    sum << "CONST max_excursion=" << fm.max_excursion << '\n';
    auto os = open_out(dir / "gauge_summary.txt");
    os << sum.str();
    out << sum.str();
    return static_cast<int>(volume_ok && residual_ok ? exit_ok : exit_estimate_failure);
  });
}

int cmd_verify(const CliOptions& o, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (!o.out) throw ConfigError("", "verify needs a run directory");
    const fs::path dir = *o.out;
    const RunConfig c = load_run_config(dir / "resolved.cfg", o.overrides);
    std::map<std::string, std::string> stored;
    bool blown = false;
    {
      std::ifstream is(dir / "summary.txt");
      if (!is) throw ConfigError("", "run directory has no summary.txt");
      std::string line;
      while (std::getline(is, line)) {
        std::istringstream ls(line);
        std::string verdict, name;
        ls >> verdict >> name;
        if (verdict == "PASS" || verdict == "FAIL" || verdict == "INFO") stored[name] = verdict;
        if (verdict == "STATUS" && name == "blow-up") blown = true;
      }
    }
    const Grid g = c.grid();
    const VelocitySource v = make_velocity_source(c, g);
    const auto cols = read_csv_columns(dir / "timeseries.csv");
    EnergyReport report;
    if (c.scheme == Scheme::galerkin) {
      WeakSeries s;
      s.t = column(cols, "t");
      s.l2_sq = column(cols, "l2_sq");
      s.grad_l2_sq = column(cols, "grad_l2_sq");
      s.lap_l2_sq = column(cols, "lap_l2_sq");
      s.dtu_l2_sq = column(cols, "dtu_l2_sq");
      s.sup_abs = column(cols, "sup_abs_u");
      s.diss_accum = column(cols, "diss_accum");
      report = check_weak_bounds(s, sample_velocity(v, s.t), c.epsilon, c.tol);
    } else {
      ParabolicSeries s;
      s.t = column(cols, "t");
      s.h1_sq = column(cols, "h1_sq");
      s.h2_surrogate_sq = column(cols, "h2_surrogate_sq");
      s.dtu_h1_sq = column(cols, "dtu_h1_sq");
      s.g_functional = column(cols, "G");
      s.form1_residual = column(cols, "form1_residual");
      s.equ_norm_ratio = column(cols, "equ_norm_ratio");
      s.sphere_drift = column(cols, "sphere_drift");
      s.l2_sq = column(cols, "l2_sq");
      s.grad_l2_sq = column(cols, "grad_l2_sq");
      s.lap_l2 = column(cols, "lap_l2");
      s.cross_orthogonality = column(cols, "cross_orthogonality");
      s.tangency = column(cols, "tangency");
      report = parabolic_report(s, sample_velocity(v, s.t), c.renormalize, c.tol);
    }
    report.write_summary(out);
    int code = report.all_hard_pass() ? exit_ok : exit_estimate_failure;
    if (o.overrides.empty()) {
      for (const auto& check : report.checks) {
        const std::string now = check.hard ? (check.pass() ? "PASS" : "FAIL") : "INFO";
        const auto it = stored.find(check.name);
        if (it == stored.end() || it->second != now) {
          out << "MISMATCH " << check.name << " stored=" << (it == stored.end() ? "missing" : it->second)
              << " recomputed=" << now << '\n';
          code = exit_estimate_failure;
        }
      }
    }
    if (blown) {
      out << "STATUS blow-up\n";
      return static_cast<int>(exit_blow_up);
    }
    return code;
  });
}

}  // namespace ismf
