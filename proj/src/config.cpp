#include "ismf/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace ismf {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream is(s);
  while (std::getline(is, item, sep)) out.push_back(trim(item));
  return out;
}

double to_double(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  double value = 0.0;
  const auto [end, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (ec != std::errc() || end != t.data() + t.size() || t.empty()) {
    throw ConfigError(key, "expected a number, got '" + text + "'");
  }
  return value;
}

int to_int(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  int value = 0;
  const auto [end, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (ec != std::errc() || end != t.data() + t.size() || t.empty()) {
    throw ConfigError(key, "expected an integer, got '" + text + "'");
  }
  return value;
}

std::string join(const std::vector<double>& xs) {
  std::ostringstream os;
  os << std::setprecision(17);
  for (std::size_t i = 0; i < xs.size(); ++i) os << (i ? "," : "") << xs[i];
  return os.str();
}

std::string join(const std::vector<int>& xs) {
  std::ostringstream os;
  for (std::size_t i = 0; i < xs.size(); ++i) os << (i ? "," : "") << xs[i];
  return os.str();
}

Interpolation parse_interpolation(const std::string& key, const std::string& text) {
  if (text == "multilinear") return Interpolation::multilinear;
  if (text == "cubic") return Interpolation::cubic;
  throw ConfigError(key, "expected multilinear or cubic, got '" + text + "'");
}

}  // namespace

ConfigFile ConfigFile::parse(std::istream& is, const std::string& origin) {
  ConfigFile file;
  std::string section;
  std::string line;
  int number = 0;
  while (std::getline(is, line)) {
    ++number;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        throw ConfigError("", origin + ":" + std::to_string(number) + ": unterminated section header");
      }
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("", origin + ":" + std::to_string(number) + ": expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw ConfigError("", origin + ":" + std::to_string(number) + ": empty key");
    const std::string full = section.empty() ? key : section + "." + key;
    if (file.values_.count(full)) throw ConfigError(full, "duplicate key");
    file.values_[full] = trim(line.substr(eq + 1));
  }
  return file;
}

ConfigFile ConfigFile::load(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("", "cannot open config file " + path.string());
  return parse(is, path.string());
}

void ConfigFile::set(const std::string& key, const std::string& value) { values_[key] = value; }

std::string ConfigFile::get_string(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) throw ConfigError(key, "missing required key");
  used_.insert(key);
  return it->second;
}

std::string ConfigFile::get_string(const std::string& key, const std::string& fallback) const {
  return has(key) ? get_string(key) : fallback;
}

double ConfigFile::get_double(const std::string& key) const { return to_double(key, get_string(key)); }

double ConfigFile::get_double(const std::string& key, double fallback) const {
  return has(key) ? get_double(key) : fallback;
}

int ConfigFile::get_int(const std::string& key, int fallback) const {
  return has(key) ? to_int(key, get_string(key)) : fallback;
}

bool ConfigFile::get_bool(const std::string& key, bool fallback) const {
  if (!has(key)) return fallback;
  const std::string v = get_string(key);
  if (v == "true" || v == "on" || v == "yes" || v == "1") return true;
  if (v == "false" || v == "off" || v == "no" || v == "0") return false;
  throw ConfigError(key, "expected a boolean, got '" + v + "'");
}

std::vector<double> ConfigFile::get_doubles(const std::string& key) const {
  std::vector<double> out;
  if (!has(key)) return out;
  const std::string v = get_string(key);
  if (trim(v).empty()) return out;
  for (const auto& item : split(v, ',')) out.push_back(to_double(key, item));
  return out;
}

std::vector<int> ConfigFile::get_ints(const std::string& key) const {
  std::vector<int> out;
  if (!has(key)) return out;
  const std::string v = get_string(key);
  if (trim(v).empty()) return out;
  for (const auto& item : split(v, ',')) out.push_back(to_int(key, item));
  return out;
}

void ConfigFile::reject_unused() const {
  for (const auto& [key, value] : values_) {
    if (!used_.count(key)) throw ConfigError(key, "unknown key");
  }
}

void apply_override(ConfigFile& file, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) throw ConfigError(assignment, "override must look like KEY=VAL");
  std::string key = trim(assignment.substr(0, eq));
  if (key.find('.') == std::string::npos) key = "tolerances." + key;
  file.set(key, trim(assignment.substr(eq + 1)));
}

std::string to_string(Scheme s) { return s == Scheme::galerkin ? "galerkin" : "parabolic"; }

std::string to_string(Interpolation i) { return i == Interpolation::multilinear ? "multilinear" : "cubic"; }

RunConfig parse_run_config(const ConfigFile& f) {
  RunConfig c;
  const std::string scheme = f.get_string("run.scheme");
  if (scheme == "galerkin") {
    c.scheme = Scheme::galerkin;
  } else if (scheme == "parabolic") {
    c.scheme = Scheme::parabolic;
  } else {
    throw ConfigError("run.scheme", "expected galerkin or parabolic, got '" + scheme + "'");
  }
  if (f.has("run.seed")) c.seed = f.get_int("run.seed", 0);

  c.cells = f.get_ints("grid.cells");
  if (c.cells.empty()) throw ConfigError("grid.cells", "missing required key");
  if (c.cells.size() > 3) throw ConfigError("grid.cells", "at most three axes");
  c.extents = f.get_doubles("grid.extents");
  if (c.extents.empty()) c.extents.assign(c.cells.size(), 1.0);
  if (c.extents.size() != c.cells.size()) throw ConfigError("grid.extents", "need one extent per axis");

  c.initial = f.get_string("initial.preset");
  c.velocity = f.get_string("velocity.preset", "zero");
  c.velocity_trajectory = f.get_string("velocity.trajectory", "");

  c.epsilon = f.get_double("solver.epsilon");
  if (!(c.epsilon > 0.0 && c.epsilon <= 1.0)) throw ConfigError("solver.epsilon", "must lie in (0, 1]");
  const int modes = f.get_int("solver.modes", 16);
  if (modes < 1) throw ConfigError("solver.modes", "must be positive");
  c.modes = static_cast<std::size_t>(modes);
  c.dt = f.get_double("solver.dt");
  if (!(c.dt > 0.0)) throw ConfigError("solver.dt", "must be positive");
  c.t_end = f.get_double("solver.t_end");
  if (!(c.t_end > 0.0)) throw ConfigError("solver.t_end", "must be positive");
  c.guard = f.get_double("solver.guard", 0.0);
  if (c.guard < 0.0) throw ConfigError("solver.guard", "must be nonnegative");
  c.enforce_guard = f.get_bool("solver.enforce_guard", true);
  if (f.has("solver.stepper")) {
    try {
      c.stepper = parse_stepper(f.get_string("solver.stepper"));
    } catch (const InvalidArgument& e) {
      throw ConfigError("solver.stepper", e.what());
    }
  }
  c.renormalize = f.get_bool("solver.renormalize", true);
  c.sample_every = f.get_int("solver.sample_every", 1);
  if (c.sample_every < 1) throw ConfigError("solver.sample_every", "must be >= 1");

  c.snapshot_times = f.get_doubles("output.snapshots");
  for (double t : c.snapshot_times) {
    if (!(t > 0.0 && t < c.t_end)) throw ConfigError("output.snapshots", "times must lie inside (0, t_end)");
  }
  c.dump_fields = f.get_bool("output.dump_fields", true);
  c.out_dir = f.get_string("output.dir", c.out_dir);

  Tolerances& t = c.tol;
  t.identity = f.get_double("tolerances.identity", t.identity);
  t.envelope = f.get_double("tolerances.envelope", t.envelope);
  t.form1 = f.get_double("tolerances.form1", t.form1);
  t.sphere = f.get_double("tolerances.sphere", t.sphere);
  t.orthogonality = f.get_double("tolerances.orthogonality", t.orthogonality);
  t.g_growth = f.get_double("tolerances.g_growth", t.g_growth);
  t.volume = f.get_double("tolerances.volume", t.volume);
  t.gauge_residual = f.get_double("tolerances.gauge_residual", t.gauge_residual);
  t.div = f.get_double("tolerances.div", t.div);
  t.bc = f.get_double("tolerances.bc", t.bc);

  c.sweep.epsilon = f.get_doubles("sweep.epsilon");
  c.sweep.modes = f.get_ints("sweep.modes");
  c.sweep.cells = f.get_ints("sweep.cells");
  for (double e : c.sweep.epsilon) {
    if (!(e > 0.0 && e <= 1.0)) throw ConfigError("sweep.epsilon", "entries must lie in (0, 1]");
  }
  for (int m : c.sweep.modes) {
    if (m < 1) throw ConfigError("sweep.modes", "entries must be positive");
  }
  for (int n : c.sweep.cells) {
    if (n < 4) throw ConfigError("sweep.cells", "entries must be at least 4");
  }

  GaugeSpec& g = c.gauge;
  g.seeds = f.get_ints("gauge.seeds");
  if (g.seeds.empty()) g.seeds.assign(c.cells.size(), 33);
  if (g.seeds.size() != c.cells.size()) throw ConfigError("gauge.seeds", "need one count per axis");
  g.gamma = f.get_double("gauge.gamma", g.gamma);
  g.dt = f.get_double("gauge.dt", g.dt);
  if (!(g.dt > 0.0)) throw ConfigError("gauge.dt", "must be positive");
  g.sample_interval = f.get_double("gauge.sample_interval", g.sample_interval);
  if (!(g.sample_interval > 0.0)) throw ConfigError("gauge.sample_interval", "must be positive");
  g.satellite_fraction = f.get_double("gauge.satellite_fraction", g.satellite_fraction);
  g.velocity_refine = f.get_int("gauge.velocity_refine", g.velocity_refine);
  if (g.velocity_refine < 1) throw ConfigError("gauge.velocity_refine", "must be >= 1");
  if (f.has("gauge.u_interpolation")) {
    g.u_interpolation = parse_interpolation("gauge.u_interpolation", f.get_string("gauge.u_interpolation"));
  }
  if (f.has("gauge.v_interpolation")) {
    g.v_interpolation = parse_interpolation("gauge.v_interpolation", f.get_string("gauge.v_interpolation"));
  }
  g.run_dir = f.get_string("gauge.run_dir", "");

  f.reject_unused();
  return c;
}

RunConfig load_run_config(const std::filesystem::path& path, const std::vector<std::string>& overrides) {
  ConfigFile file = ConfigFile::load(path);
  for (const auto& o : overrides) apply_override(file, o);
  RunConfig c = parse_run_config(file);
  c.base_dir = path.has_parent_path() ? path.parent_path() : std::filesystem::path(".");
  return c;
}

Grid RunConfig::grid() const {
  for (std::size_t a = 0; a < cells.size(); ++a) {
    if (cells[a] < 4) throw ConfigError("grid.cells", "need at least 4 cells per axis");
    if (!(extents[a] > 0.0)) throw ConfigError("grid.extents", "extents must be positive");
  }
  return Grid(extents, cells);
}

std::string RunConfig::initial_preset() const {
  const PresetCall call = parse_preset(initial, "initial.preset");
  if (call.name == "random-smooth" && call.args.size() == 1) {
    if (!seed) throw ConfigError("run.seed", "random-smooth(modes) needs run.seed");
    std::ostringstream os;
    os << "random-smooth(" << *seed << ',' << call.args[0] << ')';
    return os.str();
  }
  return initial;
}

GalerkinConfig RunConfig::galerkin() const {
  GalerkinConfig g;
  g.epsilon = epsilon;
  g.modes = modes;
  g.dt = dt;
  g.t_end = t_end;
  if (guard > 0.0) g.guard = guard;
  g.enforce_guard = enforce_guard;
  g.snapshot_times = snapshot_times;
  return g;
}

ParabolicConfig RunConfig::parabolic() const {
  ParabolicConfig p;
  p.epsilon = epsilon;
  p.dt = dt;
  p.t_end = t_end;
  p.stepper = stepper;
  if (guard > 0.0) p.guard = guard;
  p.enforce_guard = enforce_guard;
  p.renormalize = renormalize;
  p.snapshot_times = snapshot_times;
  p.sample_every = sample_every;
  return p;
}

void RunConfig::write(std::ostream& os) const {
  os << std::setprecision(17);
  os << "[run]\nscheme = " << to_string(scheme) << '\n';
  if (seed) os << "seed = " << *seed << '\n';
  os << "\n[grid]\nextents = " << join(extents) << "\ncells = " << join(cells) << '\n';
  os << "\n[initial]\npreset = " << initial << '\n';
  os << "\n[velocity]\npreset = " << velocity << '\n';
  if (!velocity_trajectory.empty()) {
    os << "trajectory = " << std::filesystem::absolute(base_dir / velocity_trajectory).string() << '\n';
  }
  os << "\n[solver]\nepsilon = " << epsilon << "\nmodes = " << modes << "\ndt = " << dt << "\nt_end = " << t_end
     << "\nguard = " << guard << "\nenforce_guard = " << (enforce_guard ? "true" : "false")
     << "\nstepper = " << to_string(stepper) << "\nrenormalize = " << (renormalize ? "true" : "false")
     << "\nsample_every = " << sample_every << '\n';
  os << "\n[output]\nsnapshots = " << join(snapshot_times) << "\ndump_fields = " << (dump_fields ? "true" : "false")
     << "\ndir = " << out_dir << '\n';
  os << "\n[tolerances]\nidentity = " << tol.identity << "\nenvelope = " << tol.envelope << "\nform1 = " << tol.form1
     << "\nsphere = " << tol.sphere << "\northogonality = " << tol.orthogonality << "\ng_growth = " << tol.g_growth
     << "\nvolume = " << tol.volume << "\ngauge_residual = " << tol.gauge_residual << "\ndiv = " << tol.div
     << "\nbc = " << tol.bc << '\n';
  os << "\n[sweep]\nepsilon = " << join(sweep.epsilon) << "\nmodes = " << join(sweep.modes)
     << "\ncells = " << join(sweep.cells) << '\n';
  os << "\n[gauge]\nseeds = " << join(gauge.seeds) << "\ngamma = " << gauge.gamma << "\ndt = " << gauge.dt
     << "\nsample_interval = " << gauge.sample_interval << "\nsatellite_fraction = " << gauge.satellite_fraction
     << "\nu_interpolation = " << to_string(gauge.u_interpolation)
     << "\nv_interpolation = " << to_string(gauge.v_interpolation) << '\n';
  if (!gauge.run_dir.empty()) os << "run_dir = " << gauge.run_dir << '\n';
}

}  // namespace ismf
