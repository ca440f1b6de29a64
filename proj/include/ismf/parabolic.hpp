#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ismf/estimates.hpp"
#include "ismf/fields.hpp"

namespace ismf {

enum class Stepper { explicit_rk4, semi_implicit };

Stepper parse_stepper(const std::string& name);
std::string to_string(Stepper s);

struct ParabolicConfig {
  double epsilon = 0.25;
  double dt = 1e-4;
  double t_end = 0.25;
  Stepper stepper = Stepper::explicit_rk4;
  /// explicit: dt <= guard h^2 / (1 + eps); semi-implicit: dt <= guard h^2
  double guard = 0.2;
  bool enforce_guard = true;
  bool renormalize = true;
  /// Times (besides 0 and t_end) at which full fields are kept.
  std::vector<double> snapshot_times;
  /// Record the diagnostic series every this many steps (and at every stop).
  int sample_every = 1;
  double cg_tol = 1e-10;
  int cg_max_iterations = 500;
  /// Blow-up threshold on sup |D+ u| (one-sided jump between neighbours).
  double jump_limit = 10.0;

  void validate() const;
  double max_stable_dt(const Grid& g) const;
};

/// Delta_h u + e_h u + u x (v . grad_h u), with e_h the energy density that
/// matches the Neumann Laplacian and plain centered transport for v . grad u.
/// For |u| = 1 at every cell the result is exactly tangent up to rounding.
Field tension_v(const Field& u, const Field& v);
Field tension_v(const SpinField& u, const Field& v);

/// eps tau + u x tau.
Field parabolic_rhs(const Field& u, const Field& v, double epsilon);

/// || lap_h u - [ (eps dtu - u x dtu)/(1 + eps^2) - e_h u - u x (v . grad_h u) ] ||_L2.
double reconstruct_laplacian_residual(const Field& u, const Field& dtu, const Field& v, double epsilon);

/// sup over cells of |<u x tau_v(u), u>|.
double cross_orthogonality_defect(const Field& u, const Field& v);

/// Largest jump |u(cell) - u(neighbour)| over all faces.
double max_face_jump(const Field& u);

class ParabolicStepper {
 public:
  ParabolicStepper(const VelocitySource& velocity, ParabolicConfig config);

  const ParabolicConfig& config() const { return config_; }

  /// Advances u from t by dt without renormalizing. Throws SolverError if
  /// a linear solve fails.
  Field advance(const Field& u, double t, double dt) const;

  /// advance + blow-up detection + optional renormalization.
  /// Throws BlowUp when the raw update is not finite or its largest face
  /// jump exceeds jump_limit.
  Field step(const Field& u, double t, double dt) const;

  int last_cg_iterations() const { return cg_iterations_; }

 private:
  Field nonstiff(const Field& u, const Field& v) const;

  const VelocitySource* velocity_;
  ParabolicConfig config_;
  mutable int cg_iterations_ = 0;
};

/// Per-sample diagnostics of a parabolic run.
struct ParabolicSeries {
  std::vector<double> t;
  std::vector<double> l2_sq;
  std::vector<double> grad_l2_sq;
  std::vector<double> h1_sq;
  std::vector<double> h2_surrogate_sq;
  std::vector<double> dtu_h1_sq;
  std::vector<double> g_functional;
  std::vector<double> form1_residual;
  std::vector<double> lap_l2;
  std::vector<double> equ_norm_ratio;
  std::vector<double> sphere_drift;
  std::vector<double> cross_orthogonality;
  std::vector<double> tangency;

  /// Spec columns first, then the extras.
  void write_csv(std::ostream& os) const;
};

struct BlowUpInfo {
  std::string what;
  double time = 0.0;
  double last_valid_time = 0.0;
};

struct ParabolicResult {
  std::vector<double> snapshot_times;
  std::vector<Field> snapshots;
  ParabolicSeries series;
  VelocitySeries velocity;
  EnergyReport report;
  std::optional<BlowUpInfo> blow_up;
  /// Final time reached (t_end unless the run blew up).
  double t_reached = 0.0;
};

/// G-bound, form-1, sphere and cross-orthogonality checks from a stored
/// series; the sphere check is soft unless the run renormalized.
EnergyReport parabolic_report(const ParabolicSeries& s, const VelocitySeries& velocity, bool renormalized,
                              const Tolerances& tol = {});

/// Integrates to t_end or to blow-up and verifies G-bound, form-1 identity,
/// sphere constraint and cross-term orthogonality.
/// Throws AdmissibilityError for an inadmissible v, InvalidArgument for a
/// dt above the guard or a u0 off the sphere.
ParabolicResult run_parabolic(const SpinField& u0, const VelocitySource& velocity, const ParabolicConfig& config,
                              const Tolerances& tol = {});

}  // namespace ismf
