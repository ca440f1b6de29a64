#pragma once

#include <array>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ismf/grid.hpp"

namespace ismf {

/// Input data cannot be used, e.g. a zero vector that must be normalized.
class DegenerateData : public std::runtime_error {
 public:
  DegenerateData(const std::string& what, std::size_t cell)
      : std::runtime_error(what), cell_(cell) {}
  std::size_t cell() const { return cell_; }

 private:
  std::size_t cell_;
};

enum class SphereMode { exact_sphere, ball };

/// R^3-valued field constrained to the unit sphere (or the closed unit ball
/// for clipped Galerkin iterates).
class SpinField {
 public:
  static constexpr double kConstraintTol = 1e-9;

  /// Validates the constraint for `mode`; throws InvalidArgument otherwise.
  SpinField(Field u, SphereMode mode);

  const Field& field() const { return u_; }
  Field& mutable_field() { return u_; }
  SphereMode mode() const { return mode_; }
  const Grid& grid() const { return u_.grid(); }

  /// max | |u| - 1 | over cells.
  double sphere_drift() const;

 private:
  Field u_;
  SphereMode mode_;
};

/// Scalar norms of an advecting field. grad_inf is the largest pointwise
/// operator 2-norm of the velocity Jacobian.
struct VelocityNorms {
  double inf = 0.0;
  double grad_inf = 0.0;
  double l3 = 0.0;
  double grad_l3 = 0.0;
  double w13() const { return l3 + grad_l3; }
};

/// Wall location of a certificate violation.
struct FaceLocation {
  int axis = -1;
  int side = 0;  // 0 = lower wall, 1 = upper wall
  std::size_t cell = 0;
};

/// Divergence and tangency certificate for an advecting field.
///
/// max_div is taken over cells that do not touch a wall. At wall-adjacent
/// cells the mirror-odd convention turns any wall flux into divergence, so
/// there the certificate reports the implied normal trace h * |div_h v|.
struct AdmissibilityCertificate {
  double max_div = 0.0;
  double max_normal_trace = 0.0;
  std::optional<FaceLocation> worst_face;
  VelocityNorms norms;
  double tol_div = 1e-10;
  double tol_bc = 1e-10;
  bool div_ok() const { return max_div <= tol_div; }
  bool bc_ok() const { return max_normal_trace <= tol_bc; }
  bool pass() const { return div_ok() && bc_ok(); }
};

struct AdmissibleField {
  Field v;
  AdmissibilityCertificate certificate;
};

/// Pointwise R^3 cross product.
Field cross(const Field& a, const Field& b);

/// Pointwise R^3 dot product, a scalar field.
Field dot(const Field& a, const Field& b);

/// u / |u| cellwise. Cells already on the sphere to rounding are left
/// untouched, which makes the operation idempotent bit for bit.
SpinField normalize_sphere(const Field& u);

VelocityNorms velocity_norms(const Field& v);

AdmissibilityCertificate check_admissible(const Field& v, double tol_div = 1e-10,
                                          double tol_bc = 1e-10);

/// v = (d_y psi, -d_x psi) with the stencils of `divergence`; psi is
/// extended oddly across every wall so div_h v vanishes identically.
AdmissibleField stream_function_field_2d(const Field& psi);

/// v = curl A on a 3D grid; component A_b is extended oddly across walls
/// normal to the other two axes.
AdmissibleField vector_potential_field_3d(const Field& potential);

/// Scalar component c of f as a one-component field.
Field component(const Field& f, int c);

/// Advecting field as a function of time: static, a sampled trajectory with
/// linear interpolation, or an analytic generator evaluated on demand.
class VelocitySource {
 public:
  using Generator = std::function<Field(double)>;

  static VelocitySource zero(const Grid& g);
  static VelocitySource constant(AdmissibleField field);
  /// Snapshots must be time-ordered and share one grid.
  static VelocitySource trajectory(std::vector<double> times, std::vector<Field> snapshots);
  static VelocitySource analytic(const Grid& g, Generator generator);

  const Grid& grid() const { return grid_; }
  bool is_static() const { return kind_ == Kind::constant; }
  bool is_zero() const { return zero_; }

  Field at(double t) const;
  /// Central-difference estimate of dv/dt (zero for a static field).
  Field time_derivative(double t) const;
  /// Certificate of the field at time t.
  AdmissibilityCertificate certificate(double t, double tol_div = 1e-10,
                                       double tol_bc = 1e-10) const;

 private:
  enum class Kind { constant, trajectory, analytic };
  Kind kind_ = Kind::constant;
  Grid grid_;
  bool zero_ = false;
  std::optional<AdmissibleField> static_;
  std::vector<double> times_;
  std::vector<Field> snapshots_;
  Generator generator_;
  double fd_step_ = 1e-4;
};

}  // namespace ismf
