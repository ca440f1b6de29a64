#include "ismf/galerkin.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ismf/errors.hpp"
#include "ismf/time_grid.hpp"

namespace ismf {

Field clip_J(const Field& u) {
  if (u.components() != 3) throw InvalidArgument("clip_J: need 3 components");
  Field out = u;
  for (std::size_t cell = 0; cell < u.cells(); ++cell) {
    const auto x = u.vec3(cell);
    const double n = std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
    if (n > 1.0) out.set_vec3(cell, {x[0] / n, x[1] / n, x[2] / n});
  }
  return out;
}

void GalerkinConfig::validate() const {
  if (!(epsilon > 0.0 && epsilon <= 1.0)) throw InvalidArgument("galerkin: epsilon must lie in (0, 1]");
  if (modes == 0) throw InvalidArgument("galerkin: need at least one mode");
  if (!(dt > 0.0)) throw InvalidArgument("galerkin: dt must be positive");
  if (!(t_end > 0.0)) throw InvalidArgument("galerkin: t_end must be positive");
  if (!(guard > 0.0)) throw InvalidArgument("galerkin: guard must be positive");
}

void require_admissible(const VelocitySource& v, const std::vector<double>& times, const Tolerances& tol) {
  for (double t : times) {
    const auto cert = v.certificate(t, tol.div, tol.bc);
    if (!cert.pass()) {
      std::ostringstream os;
      os << "advecting field is not admissible at t=" << t << ": max div " << cert.max_div
         << ", max normal trace " << cert.max_normal_trace;
      if (cert.worst_face) {
        os << " (axis " << cert.worst_face->axis << (cert.worst_face->side ? " upper" : " lower")
           << " wall, cell " << cert.worst_face->cell << ")";
      }
      throw AdmissibilityError(os.str());
    }
  }
}

GalerkinSystem::GalerkinSystem(const SpectralBasis& basis, const VelocitySource& velocity, GalerkinConfig config)
    : basis_(&basis), velocity_(&velocity), config_(std::move(config)) {
  config_.validate();
  if (basis.size() != config_.modes) throw InvalidArgument("galerkin: basis size differs from config.modes");
  if (!(velocity.grid() == basis.grid())) throw InvalidArgument("galerkin: velocity lives on another grid");
  v_inf_ = velocity.is_zero() ? 0.0 : velocity_norms(velocity.at(0.0)).inf;
  if (!velocity.is_static()) {
    // sampled fields: guard against the fastest sample over the run
    for (int i = 1; i <= 16; ++i) {
      v_inf_ = std::max(v_inf_, velocity_norms(velocity.at(config_.t_end * i / 16.0)).inf);
    }
  }
}

double GalerkinSystem::max_stable_dt() const {
  const Grid& g = basis_->grid();
  double inv_h = 0.0;
  for (int a = 0; a < g.dim(); ++a) inv_h = std::max(inv_h, 1.0 / g.spacing(a));
  const double lambda = basis_->max_eigenvalue();
  return config_.guard / (config_.epsilon * lambda + v_inf_ * inv_h + lambda);
}

SpectralState GalerkinSystem::nonlinear_part(const SpectralState& s, double t) const {
  const Grid& g = basis_->grid();
  const Field u = synthesize(s, *basis_);
  Field product(g, 3);
  if (config_.use_cross) {
    const Field lap = synthesize(spectral_laplacian(s, *basis_), *basis_);
    product = cross(config_.use_clip ? clip_J(u) : u, lap);
  }
  if (config_.use_advection && !velocity_->is_zero()) product -= advect(velocity_->at(t), u, g);
  SpectralState out = analyze(product, *basis_);
  out.t = t;
  return out;
}

SpectralState GalerkinSystem::rhs(const SpectralState& s, double t) const {
  SpectralState out = nonlinear_part(s, t);
  for (std::size_t k = 0; k < basis_->size(); ++k) {
    const double decay = -config_.epsilon * (basis_->eigenvalue(k) - 1.0);
    for (int c = 0; c < 3; ++c) out(k, c) += decay * s(k, c);
  }
  return out;
}

double GalerkinSystem::dissipation_rate(const SpectralState& s) const {
  return 2.0 * config_.epsilon * spectral_energy(s, *basis_, 1);
}

namespace {

SpectralState add_scaled(const SpectralState& a, double w, const SpectralState& b) {
  SpectralState out = a;
  for (std::size_t i = 0; i < out.coeffs.size(); ++i) out.coeffs[i] += w * b.coeffs[i];
  return out;
}

}  // namespace

SpectralState GalerkinSystem::step_rk4(const SpectralState& s, double dt, double* dissipation,
                                       SpectralState* initial_slope) const {
  const double t = s.t;
  const SpectralState k1 = rhs(s, t);
  const SpectralState s2 = add_scaled(s, 0.5 * dt, k1);
  const SpectralState k2 = rhs(s2, t + 0.5 * dt);
  const SpectralState s3 = add_scaled(s, 0.5 * dt, k2);
  const SpectralState k3 = rhs(s3, t + 0.5 * dt);
  const SpectralState s4 = add_scaled(s, dt, k3);
  const SpectralState k4 = rhs(s4, t + dt);
  SpectralState out = s;
  for (std::size_t i = 0; i < out.coeffs.size(); ++i) {
    out.coeffs[i] += dt / 6.0 * (k1.coeffs[i] + 2.0 * k2.coeffs[i] + 2.0 * k3.coeffs[i] + k4.coeffs[i]);
  }
  out.t = t + dt;
  if (dissipation) {
    *dissipation = dt / 6.0 *
                   (dissipation_rate(s) + 2.0 * dissipation_rate(s2) + 2.0 * dissipation_rate(s3) +
                    dissipation_rate(s4));
  }
  if (initial_slope) *initial_slope = k1;
  if (!out.all_finite()) {
    std::ostringstream os;
    os << "galerkin: non-finite coefficients at t=" << out.t;
    throw BlowUp(os.str(), out.t, t);
  }
  return out;
}

GalerkinResult run_galerkin(const SpinField& u0, const VelocitySource& velocity, const GalerkinConfig& config,
                            const Tolerances& tol) {
  config.validate();
  const SpectralBasis basis(u0.grid(), config.modes);
  return run_galerkin(basis, u0, velocity, config, tol);
}

GalerkinResult run_galerkin(const SpectralBasis& basis, const SpinField& u0, const VelocitySource& velocity,
                            const GalerkinConfig& config, const Tolerances& tol) {
  const GalerkinSystem system(basis, velocity, config);
  require_admissible(velocity, {0.0, config.t_end}, tol);
  if (config.enforce_guard && config.dt > system.max_stable_dt() * (1.0 + 1e-12)) {
    std::ostringstream os;
    os << "galerkin: dt=" << config.dt << " exceeds the stability guard " << system.max_stable_dt();
    throw InvalidArgument(os.str());
  }

  const StepSchedule schedule = StepSchedule::build(config.t_end, config.dt, config.snapshot_times);
  GalerkinResult result;
  WeakSeries& series = result.series;

  SpectralState state = analyze(u0.field(), basis);
  state.t = 0.0;
  double diss = 0.0;

  auto record = [&](const SpectralState& s, const SpectralState& slope) {
    series.t.push_back(s.t);
    series.l2_sq.push_back(s.norm_sq());
    series.grad_l2_sq.push_back(spectral_energy(s, basis, 1));
    series.lap_l2_sq.push_back(spectral_energy(s, basis, 2));
    series.dtu_l2_sq.push_back(slope.norm_sq());
    series.sup_abs.push_back(max_pointwise_norm(synthesize(s, basis)));
    series.diss_accum.push_back(diss);
  };
  auto snapshot = [&](const SpectralState& s) {
    result.snapshot_times.push_back(s.t);
    result.states.push_back(s);
    result.snapshots.push_back(synthesize(s, basis));
  };

  snapshot(state);
  double segment_start = 0.0;
  for (std::size_t seg = 0; seg < schedule.stops.size(); ++seg) {
    const int steps = schedule.steps_per_segment[seg];
    const double dt = schedule.dt_per_segment[seg];
    for (int j = 0; j < steps; ++j) {
      double increment = 0.0;
      SpectralState slope;
      SpectralState next = system.step_rk4(state, dt, &increment, &slope);
      record(state, slope);
      diss += increment;
      next.t = j + 1 == steps ? schedule.stops[seg] : segment_start + (j + 1) * dt;
      state = std::move(next);
    }
    segment_start = schedule.stops[seg];
    snapshot(state);
  }
  record(state, system.rhs(state, state.t));

  result.velocity = sample_velocity(velocity, series.t);
  result.report = check_weak_bounds(series, result.velocity, config.epsilon, tol);
  return result;
}

}  // namespace ismf
