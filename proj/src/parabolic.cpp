#include "ismf/parabolic.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "ismf/cg.hpp"
#include "ismf/errors.hpp"
#include "ismf/galerkin.hpp"
#include "ismf/time_grid.hpp"

namespace ismf {

Stepper parse_stepper(const std::string& name) {
  if (name == "explicit-rk4") return Stepper::explicit_rk4;
  if (name == "semi-implicit") return Stepper::semi_implicit;
  throw InvalidArgument("unknown stepper '" + name + "' (expected explicit-rk4 or semi-implicit)");
}

std::string to_string(Stepper s) { return s == Stepper::explicit_rk4 ? "explicit-rk4" : "semi-implicit"; }

void ParabolicConfig::validate() const {
  if (!(epsilon > 0.0 && epsilon <= 1.0)) throw InvalidArgument("parabolic: epsilon must lie in (0, 1]");
  if (!(dt > 0.0)) throw InvalidArgument("parabolic: dt must be positive");
  if (!(t_end > 0.0)) throw InvalidArgument("parabolic: t_end must be positive");
  if (!(guard > 0.0)) throw InvalidArgument("parabolic: guard must be positive");
  if (sample_every < 1) throw InvalidArgument("parabolic: sample_every must be >= 1");
  if (!(cg_tol > 0.0) || cg_max_iterations < 1) throw InvalidArgument("parabolic: bad CG settings");
  if (!(jump_limit > 0.0)) throw InvalidArgument("parabolic: jump_limit must be positive");
}

double ParabolicConfig::max_stable_dt(const Grid& g) const {
  const double h = g.min_spacing();
  return stepper == Stepper::explicit_rk4 ? guard * h * h / (1.0 + epsilon) : guard * h * h;
}

Field tension_v(const Field& u, const Field& v) {
  if (u.components() != 3) throw InvalidArgument("tension_v: u must have 3 components");
  const Grid& g = u.grid();
  require_on_grid(v, g, "tension_v");
  Field tau = laplacian_neumann(u, g);
  const Field e = energy_density(u);
  for (std::size_t cell = 0; cell < g.size(); ++cell) {
    for (int c = 0; c < 3; ++c) tau(cell, c) += e(cell, 0) * u(cell, c);
  }
  tau += cross(u, transport(v, u, g));
  return tau;
}

Field tension_v(const SpinField& u, const Field& v) {
  if (u.mode() != SphereMode::exact_sphere) throw InvalidArgument("tension_v: u must be sphere-valued");
  return tension_v(u.field(), v);
}

Field parabolic_rhs(const Field& u, const Field& v, double epsilon) {
  const Field tau = tension_v(u, v);
  Field out = cross(u, tau);
  out.axpy(epsilon, tau);
  return out;
}

double reconstruct_laplacian_residual(const Field& u, const Field& dtu, const Field& v, double epsilon) {
  require_same_shape(u, dtu, "reconstruct_laplacian_residual");
  const Grid& g = u.grid();
  Field rhs = dtu;
  rhs *= epsilon;
  rhs -= cross(u, dtu);
  rhs *= 1.0 / (1.0 + epsilon * epsilon);
  const Field e = energy_density(u);
  for (std::size_t cell = 0; cell < g.size(); ++cell) {
    for (int c = 0; c < 3; ++c) rhs(cell, c) -= e(cell, 0) * u(cell, c);
  }
  rhs -= cross(u, transport(v, u, g));
  return std::sqrt(l2_norm_sq(laplacian_neumann(u, g) - rhs));
}

double cross_orthogonality_defect(const Field& u, const Field& v) {
  const Field d = dot(cross(u, tension_v(u, v)), u);
  return max_abs(d);
}

double max_face_jump(const Field& u) {
  const Grid& g = u.grid();
  double worst = 0.0;
  for (int a = 0; a < g.dim(); ++a) {
    const std::size_t s = g.stride(a);
    for (std::size_t cell = 0; cell < g.size(); ++cell) {
      if (g.coords(cell)[a] + 1 >= g.cells(a)) continue;
      double sq = 0.0;
      for (int c = 0; c < u.components(); ++c) {
        const double d = u(cell + s, c) - u(cell, c);
        sq += d * d;
      }
      worst = std::max(worst, std::sqrt(sq));
    }
  }
  return worst;
}

ParabolicStepper::ParabolicStepper(const VelocitySource& velocity, ParabolicConfig config)
    : velocity_(&velocity), config_(std::move(config)) {
  config_.validate();
}

Field ParabolicStepper::nonstiff(const Field& u, const Field& v) const {
  Field n = parabolic_rhs(u, v, config_.epsilon);
  n.axpy(-config_.epsilon, laplacian_neumann(u, u.grid()));
  return n;
}

Field ParabolicStepper::advance(const Field& u, double t, double dt) const {
  const double eps = config_.epsilon;
  if (config_.stepper == Stepper::explicit_rk4) {
    const Field v0 = velocity_->at(t);
    const Field vh = velocity_->at(t + 0.5 * dt);
    const Field v1 = velocity_->at(t + dt);
    const Field k1 = parabolic_rhs(u, v0, eps);
    Field s = u;
    s.axpy(0.5 * dt, k1);
    const Field k2 = parabolic_rhs(s, vh, eps);
    s = u;
    s.axpy(0.5 * dt, k2);
    const Field k3 = parabolic_rhs(s, vh, eps);
    s = u;
    s.axpy(dt, k3);
    const Field k4 = parabolic_rhs(s, v1, eps);
    Field out = u;
    out.axpy(dt / 6.0, k1);
    out.axpy(dt / 3.0, k2);
    out.axpy(dt / 3.0, k3);
    out.axpy(dt / 6.0, k4);
    return out;
  }
  // Crank-Nicolson on eps*lap, Heun predictor-corrector on the rest.
  const double alpha = 0.5 * dt * eps;
  Field base = u;
  base.axpy(alpha, laplacian_neumann(u, u.grid()));
  const Field n0 = nonstiff(u, velocity_->at(t));
  Field b = base;
  b.axpy(dt, n0);
  Field predicted = u;
  cg_iterations_ = solve_shifted_laplacian(b, alpha, predicted, config_.cg_tol, config_.cg_max_iterations).iterations;
  const Field n1 = nonstiff(predicted, velocity_->at(t + dt));
  b = base;
  b.axpy(0.5 * dt, n0);
  b.axpy(0.5 * dt, n1);
  Field out = predicted;
  cg_iterations_ += solve_shifted_laplacian(b, alpha, out, config_.cg_tol, config_.cg_max_iterations).iterations;
  return out;
}

Field ParabolicStepper::step(const Field& u, double t, double dt) const {
  Field raw = advance(u, t, dt);
  const bool finite = raw.all_finite();
  const double jump = finite ? max_face_jump(raw) : 0.0;
  if (!finite || jump > config_.jump_limit) {
    std::ostringstream os;
    os << "parabolic solution left the regular regime at t=" << t + dt;
    if (finite) {
      os << " (face jump " << jump << " > " << config_.jump_limit << ")";
    } else {
      os << " (non-finite values)";
    }
    os << "; last valid time " << t;
    throw BlowUp(os.str(), t + dt, t);
  }
  if (!config_.renormalize) return raw;
  return normalize_sphere(raw).field();
}

void ParabolicSeries::write_csv(std::ostream& os) const {
  os << "t,h1_sq,h2_surrogate_sq,dtu_h1_sq,G,form1_residual,equ_norm_ratio,sphere_drift,"
        "l2_sq,grad_l2_sq,lap_l2,cross_orthogonality,tangency\n";
  os << std::setprecision(17);
  for (std::size_t i = 0; i < t.size(); ++i) {
    os << t[i] << ',' << h1_sq[i] << ',' << h2_surrogate_sq[i] << ',' << dtu_h1_sq[i] << ',' << g_functional[i]
       << ',' << form1_residual[i] << ',' << equ_norm_ratio[i] << ',' << sphere_drift[i] << ',' << l2_sq[i]
       << ',' << grad_l2_sq[i] << ',' << lap_l2[i] << ',' << cross_orthogonality[i] << ',' << tangency[i]
       << '\n';
  }
}

namespace {

double drift_of(const Field& u) {
  double worst = 0.0;
  for (std::size_t cell = 0; cell < u.cells(); ++cell) {
    const auto x = u.vec3(cell);
    worst = std::max(worst, std::abs(std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]) - 1.0));
  }
  return worst;
}

void record_sample(ParabolicSeries& s, const Field& u, const Field& v, double t, double epsilon) {
  const Field tau = tension_v(u, v);
  Field dtu = cross(u, tau);
  s.cross_orthogonality.push_back(max_abs(dot(dtu, u)));
  dtu.axpy(epsilon, tau);
  s.tangency.push_back(max_abs(dot(tau, u)));

  const NormSet nu = norms(u);
  const double dtu_h1 = l2_norm_sq(dtu) + dirichlet_energy(dtu);
  s.t.push_back(t);
  s.l2_sq.push_back(nu.l2_sq);
  s.grad_l2_sq.push_back(nu.grad_l2_sq);
  s.h1_sq.push_back(nu.h1_sq);
  s.h2_surrogate_sq.push_back(nu.h2_surrogate_sq);
  s.dtu_h1_sq.push_back(dtu_h1);
  s.g_functional.push_back((1.0 + epsilon * epsilon) * nu.h2_surrogate_sq + dtu_h1 + 1.0);
  s.form1_residual.push_back(reconstruct_laplacian_residual(u, dtu, v, epsilon));
  s.lap_l2.push_back(std::sqrt(nu.lap_l2_sq));
  s.equ_norm_ratio.push_back(equivalent_h3_ratio(nu, dtu_h1, velocity_norms(v).w13()));
  s.sphere_drift.push_back(drift_of(u));
}

}  // namespace

EnergyReport parabolic_report(const ParabolicSeries& s, const VelocitySeries& velocity, bool renormalized,
                              const Tolerances& tol) {
  if (s.t.empty()) throw InvalidArgument("parabolic_report: empty series");
  if (velocity.t.size() != s.t.size()) throw InvalidArgument("parabolic_report: velocity series misaligned");
  EnergyReport report;
  report.env = envelopes(velocity);

  EstimateCheck g_bound{"G-bound-4.5", EstimateCheck::Kind::inequality, true, 0.0, 0.0, s.t, s.g_functional, {}};
  g_bound.rhs.assign(s.t.size(), tol.g_growth * s.g_functional.front());
  report.checks.push_back(std::move(g_bound));

  EstimateCheck form1{"form1-4.2", EstimateCheck::Kind::inequality, true, 0.0, 0.0, s.t, s.form1_residual, {}};
  for (double lap : s.lap_l2) form1.rhs.push_back(tol.form1 * lap);
  report.checks.push_back(std::move(form1));

  EstimateCheck sphere{"sphere-1.3", EstimateCheck::Kind::inequality, renormalized, 0.0, 0.0,
                       s.t, s.sphere_drift, std::vector<double>(s.t.size(), tol.sphere)};
  report.checks.push_back(std::move(sphere));

  EstimateCheck orth{"cross-orth-1.3", EstimateCheck::Kind::inequality, true, 0.0, 0.0, s.t,
                     s.cross_orthogonality, std::vector<double>(s.t.size(), tol.orthogonality)};
  report.checks.push_back(std::move(orth));

  std::vector<double> forcing(s.t.size());
  for (std::size_t i = 0; i < s.t.size(); ++i) forcing[i] = velocity.forcing(i);
  report.constants.push_back({"G-4.5:C_hat", fit_g_constant(s.t, s.g_functional, velocity.w13, forcing)});
  report.constants.push_back(
      {"equ-n:C_hat", *std::max_element(s.equ_norm_ratio.begin(), s.equ_norm_ratio.end())});
  report.constants.push_back({"t_reached", s.t.back()});
  return report;
}

ParabolicResult run_parabolic(const SpinField& u0, const VelocitySource& velocity, const ParabolicConfig& config,
                              const Tolerances& tol) {
  config.validate();
  if (u0.mode() != SphereMode::exact_sphere) throw InvalidArgument("parabolic: u0 must be sphere-valued");
  if (!(velocity.grid() == u0.grid())) throw InvalidArgument("parabolic: velocity lives on another grid");
  require_admissible(velocity, {0.0, config.t_end}, tol);
  const double dt_max = config.max_stable_dt(u0.grid());
  if (config.enforce_guard && config.dt > dt_max * (1.0 + 1e-12)) {
    std::ostringstream os;
    os << "parabolic: dt=" << config.dt << " exceeds the stability guard " << dt_max;
    throw InvalidArgument(os.str());
  }

  const ParabolicStepper stepper(velocity, config);
  const StepSchedule schedule = StepSchedule::build(config.t_end, config.dt, config.snapshot_times);
  ParabolicResult result;
  Field u = u0.field();
  double t = 0.0;
  result.snapshot_times.push_back(t);
  result.snapshots.push_back(u);
  record_sample(result.series, u, velocity.at(t), t, config.epsilon);

  long long count = 0;
  double segment_start = 0.0;
  try {
    for (std::size_t seg = 0; seg < schedule.stops.size(); ++seg) {
      const int steps = schedule.steps_per_segment[seg];
      const double dt = schedule.dt_per_segment[seg];
      for (int j = 0; j < steps; ++j) {
        u = stepper.step(u, t, dt);
        t = j + 1 == steps ? schedule.stops[seg] : segment_start + (j + 1) * dt;
        ++count;
        if (j + 1 == steps || count % config.sample_every == 0) {
          record_sample(result.series, u, velocity.at(t), t, config.epsilon);
        }
      }
      segment_start = schedule.stops[seg];
      result.snapshot_times.push_back(t);
      result.snapshots.push_back(u);
    }
  } catch (const BlowUp& e) {
    result.blow_up = BlowUpInfo{e.what(), e.time(), e.last_valid_time()};
    if (result.series.t.back() != t) record_sample(result.series, u, velocity.at(t), t, config.epsilon);
  }
  result.t_reached = t;

  result.velocity = sample_velocity(velocity, result.series.t);
  result.report = parabolic_report(result.series, result.velocity, config.renormalize, tol);
  return result;
}

}  // namespace ismf
