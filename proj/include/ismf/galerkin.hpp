#pragma once

#include <vector>

#include "ismf/estimates.hpp"
#include "ismf/fields.hpp"
#include "ismf/spectral.hpp"

namespace ismf {

/// Pointwise u / max(1, |u|).
Field clip_J(const Field& u);

struct GalerkinConfig {
  double epsilon = 0.1;
  std::size_t modes = 16;
  double dt = 1e-3;
  double t_end = 1.0;
  /// dt <= guard / (eps lambda_max + ||v||_inf max_j 1/h_j + lambda_max)
  double guard = 2.5;
  bool enforce_guard = true;
  /// Times (besides 0 and t_end) at which full fields are kept.
  std::vector<double> snapshot_times;

  // Test hooks: switch off parts of the nonlinear term.
  bool use_clip = true;
  bool use_cross = true;
  bool use_advection = true;

  void validate() const;
};

/// Coefficient ODE dg/dt = -eps (lambda - 1) g + P_n{ -adv(v, u_n) + J(u_n) x lap u_n }.
///
/// u_n and its exact Laplacian are synthesized at cell centers, the product
/// is formed pointwise and projected back. Advection uses the skew form so
/// that the L2 law holds at the discrete level.
class GalerkinSystem {
 public:
  GalerkinSystem(const SpectralBasis& basis, const VelocitySource& velocity, GalerkinConfig config);

  const SpectralBasis& basis() const { return *basis_; }
  const GalerkinConfig& config() const { return config_; }

  SpectralState rhs(const SpectralState& s, double t) const;
  /// Right-hand side split into the diagonal diffusion part and the
  /// projected nonlinear part (for diagnostics).
  SpectralState nonlinear_part(const SpectralState& s, double t) const;
  /// 2 eps sum (lambda - 1) |g|^2 = 2 eps ||grad u_n||^2.
  double dissipation_rate(const SpectralState& s) const;

  /// One classical RK4 step. `dissipation` (if given) receives the
  /// integral of dissipation_rate over the step with the same stages.
  /// Throws BlowUp if the new state is not finite.
  SpectralState step_rk4(const SpectralState& s, double dt, double* dissipation = nullptr,
                         SpectralState* initial_slope = nullptr) const;

  /// Largest dt admitted by the stability guard.
  double max_stable_dt() const;

 private:
  const SpectralBasis* basis_;
  const VelocitySource* velocity_;
  GalerkinConfig config_;
  double v_inf_ = 0.0;
};

struct GalerkinResult {
  std::vector<double> snapshot_times;
  std::vector<Field> snapshots;
  std::vector<SpectralState> states;
  WeakSeries series;
  VelocitySeries velocity;
  EnergyReport report;
};

/// Integrates from P_n u0 to t_end and verifies the weak-scheme estimates.
/// Throws AdmissibilityError if v fails its certificate, InvalidArgument
/// for a dt above the guard, BlowUp on non-finite states.
GalerkinResult run_galerkin(const SpinField& u0, const VelocitySource& velocity, const GalerkinConfig& config,
                            const Tolerances& tol = {});

/// Same, reusing an existing basis of matching size.
GalerkinResult run_galerkin(const SpectralBasis& basis, const SpinField& u0, const VelocitySource& velocity,
                            const GalerkinConfig& config, const Tolerances& tol = {});

/// Rejects a velocity source whose certificate fails at any of `times`.
void require_admissible(const VelocitySource& v, const std::vector<double>& times, const Tolerances& tol);

}  // namespace ismf
