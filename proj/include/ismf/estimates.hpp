#pragma once

#include <array>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ismf/fields.hpp"
#include "ismf/grid.hpp"

namespace ismf {

/// Discrete Sobolev quantities of a field. Gradient energies use the face
/// differences of the Neumann Laplacian, so grad_l2_sq = -<f, lap f>.
struct NormSet {
  double l2_sq = 0.0;
  double grad_l2_sq = 0.0;
  double h1_sq = 0.0;
  double lap_l2_sq = 0.0;
  double h2_surrogate_sq = 0.0;
  double h3_surrogate_sq = 0.0;
  double sup_abs = 0.0;
};

NormSet norms(const Field& f);

/// Full stencil H2 norm squared: L2 + gradient + every second derivative.
double h2_full_sq(const Field& f);

/// ||f||_{H2} / (||f||_{L2} + ||lap f||_{L2}); the ratio bounded by the
/// equivalent-norm constant.
double equivalent_norm_ratio(const Field& f);

/// Trapezoid cumulative integral; out[0] = 0.
std::vector<double> cumulative_trapezoid(const std::vector<double>& t, const std::vector<double>& y);

/// Time envelopes of the advecting field.
struct Envelopes {
  std::vector<double> t;
  std::vector<double> gronwall;   // I(t) = 2 int_0^t ||grad v||_inf
  std::vector<double> speed_sq;   // S(t) = int_0^t ||v||_inf^2
  std::vector<double> forcing;    // int_0^t f, f = ||dv/dt||_H1^2 + ||v||_inf^4 + ||grad v||_inf^2
};

/// Per-sample scalar norms of v.
struct VelocitySeries {
  std::vector<double> t;
  std::vector<double> inf;
  std::vector<double> grad_inf;
  std::vector<double> w13;
  std::vector<double> dtv_h1_sq;
  /// f(t) = ||dv/dt||_H1^2 + ||v||_inf^4 + ||grad v||_inf^2
  double forcing(std::size_t i) const;
};

VelocitySeries sample_velocity(const VelocitySource& v, const std::vector<double>& times);
Envelopes envelopes(const VelocitySeries& v);

/// One verified estimate.
struct EstimateCheck {
  enum class Kind { inequality, identity };
  std::string name;
  Kind kind = Kind::inequality;
  bool hard = true;
  double tolerance = 0.0;
  /// absolute floor added to the allowance, for identically vanishing envelopes
  double abs_floor = 0.0;
  std::vector<double> t;
  std::vector<double> lhs;
  std::vector<double> rhs;

  /// rhs (1 + tol) + floor - lhs for inequalities, tol |rhs| + floor - |lhs - rhs|
  /// for identities. Pass iff every entry is >= 0.
  std::vector<double> slack() const;
  bool pass() const;
  std::optional<double> first_violation() const;
  double min_slack() const;
};

struct FittedConstant {
  std::string name;
  double value = 0.0;
};

struct EnergyReport {
  std::vector<EstimateCheck> checks;
  std::vector<FittedConstant> constants;
  Envelopes env;

  bool all_hard_pass() const;
  const EstimateCheck* find(const std::string& name) const;
  /// One line per estimate: "PASS|FAIL|INFO <name> ...".
  void write_summary(std::ostream& os) const;
  /// Long format: estimate,t,lhs,rhs,slack.
  void write_csv(std::ostream& os) const;
};

struct Tolerances {
  double identity = 1e-6;
  double envelope = 1e-3;
  double form1 = 1e-10;
  double sphere = 1e-12;
  double orthogonality = 1e-12;
  double g_growth = 10.0;
  double volume = 1e-4;
  double gauge_residual = 5e-2;
  double div = 1e-10;
  double bc = 1e-10;
};

/// Norm series of a weak-scheme run, one entry per time sample.
struct WeakSeries {
  std::vector<double> t;
  std::vector<double> l2_sq;
  std::vector<double> grad_l2_sq;
  std::vector<double> lap_l2_sq;
  std::vector<double> dtu_l2_sq;
  std::vector<double> sup_abs;
  /// 2 eps int_0^t ||grad u||^2, integrated with the solver; empty means
  /// "integrate grad_l2_sq by the trapezoid rule".
  std::vector<double> diss_accum;
};

/// L2 law, H1 Gronwall envelopes, time-integrated dt u bound, the H1 bound
/// of the weak solution and the maximum-principle overshoot.
/// Throws InvalidArgument when the series are not time-aligned.
EnergyReport check_weak_bounds(const WeakSeries& u, const VelocitySeries& v, double epsilon,
                               const Tolerances& tol = {});

/// Same checks from field snapshots: stencil norms and central time
/// differences for dt u.
EnergyReport check_weak_bounds(const std::vector<double>& times, const std::vector<Field>& u,
                               const VelocitySource& v, double epsilon, const Tolerances& tol = {});

/// Test function a(t) e_c prod_j cos(k_j pi x_j / L_j), a(t) = a0 + a1 t.
struct CosineTestFunction {
  std::array<int, 3> k{0, 0, 0};
  int component = 2;
  double a0 = 1.0;
  double a1 = 0.0;

  double shape(const Grid& g, const std::array<double, 3>& x) const;
  double shape_derivative(const Grid& g, const std::array<double, 3>& x, int axis) const;
  double amplitude(double t) const { return a0 + a1 * t; }
};

/// |LHS| of the weak formulation for a snapshot trajectory; time integrals
/// by the trapezoid rule, advection in skew form, spatial gradients by
/// centered stencils.
double weak_form_residual(const std::vector<double>& times, const std::vector<Field>& u,
                          const VelocitySource& v, const CosineTestFunction& phi);

/// max over common samples of ||a - b||_L2, the finer field restricted to
/// the coarser grid when the grids differ. Throws InvalidArgument on
/// misaligned stamps.
double sup_l2_difference(const std::vector<double>& times_a, const std::vector<Field>& a,
                         const std::vector<double>& times_b, const std::vector<Field>& b);

/// G = (1 + eps^2) ||u||_H2^2 + ||dt u||_H1^2 + 1 with the surrogate H2 norm.
double functional_G(const Field& u, const Field& dtu, double epsilon);

/// ||u||_H3^2 / (1 + ||u||_H2^2 + ||dt u||_H1^2 + ||v||_W13^2)^3.
double equivalent_h3_ratio(const NormSet& u, double dtu_h1_sq, double v_w13);

/// max over samples of dG/dt / ((G + ||v||_W13^2)^4 + g(t)), dG/dt by
/// central differences; 0 if G never grows.
double fit_g_constant(const std::vector<double>& t, const std::vector<double>& g_values,
                      const std::vector<double>& v_w13, const std::vector<double>& forcing);

}  // namespace ismf
