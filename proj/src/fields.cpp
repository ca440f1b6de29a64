#include "ismf/fields.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace ismf {

SpinField::SpinField(Field u, SphereMode mode) : u_(std::move(u)), mode_(mode) {
  if (u_.components() != 3) throw InvalidArgument("spin field: need 3 components");
  for (std::size_t cell = 0; cell < u_.cells(); ++cell) {
    const auto x = u_.vec3(cell);
    const double n = std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
    const bool ok = mode_ == SphereMode::exact_sphere ? std::abs(n - 1.0) <= kConstraintTol
                                                      : n <= 1.0 + kConstraintTol;
    if (!ok) {
      std::ostringstream os;
      os << "spin field: |u| = " << n << " at cell " << cell << " violates the "
         << (mode_ == SphereMode::exact_sphere ? "sphere" : "ball") << " constraint";
      throw InvalidArgument(os.str());
    }
  }
}

double SpinField::sphere_drift() const {
  double drift = 0.0;
  for (std::size_t cell = 0; cell < u_.cells(); ++cell) {
    const auto x = u_.vec3(cell);
    drift = std::max(drift, std::abs(std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]) - 1.0));
  }
  return drift;
}

Field cross(const Field& a, const Field& b) {
  require_same_shape(a, b, "cross");
  if (a.components() != 3) throw InvalidArgument("cross: need 3 components");
  Field out(a.grid(), 3);
  for (std::size_t cell = 0; cell < a.cells(); ++cell) {
    const auto x = a.vec3(cell);
    const auto y = b.vec3(cell);
    out.set_vec3(cell, {x[1] * y[2] - x[2] * y[1], x[2] * y[0] - x[0] * y[2], x[0] * y[1] - x[1] * y[0]});
  }
  return out;
}

Field dot(const Field& a, const Field& b) {
  require_same_shape(a, b, "dot");
  Field out(a.grid(), 1);
  for (std::size_t cell = 0; cell < a.cells(); ++cell) {
    double s = 0.0;
    for (int c = 0; c < a.components(); ++c) s += a(cell, c) * b(cell, c);
    out(cell, 0) = s;
  }
  return out;
}

SpinField normalize_sphere(const Field& u) {
  if (u.components() != 3) throw InvalidArgument("normalize_sphere: need 3 components");
  constexpr double on_sphere = 4.0 * std::numeric_limits<double>::epsilon();
  Field out = u;
  for (std::size_t cell = 0; cell < u.cells(); ++cell) {
    auto x = u.vec3(cell);
    const double n = std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
    if (!(n > 0.0) || !std::isfinite(n)) {
      std::ostringstream os;
      os << "normalize_sphere: |u| = " << n << " at cell " << cell;
      throw DegenerateData(os.str(), cell);
    }
    if (std::abs(n - 1.0) <= on_sphere) continue;
    out.set_vec3(cell, {x[0] / n, x[1] / n, x[2] / n});
  }
  return SpinField(std::move(out), SphereMode::exact_sphere);
}

Field component(const Field& f, int c) {
  Field out(f.grid(), 1);
  for (std::size_t cell = 0; cell < f.cells(); ++cell) out(cell, 0) = f(cell, c);
  return out;
}

namespace {

// Largest eigenvalue of a symmetric positive semi-definite matrix of order
// 1..3 (closed form).
double max_eigenvalue_sym(const std::array<std::array<double, 3>, 3>& a, int n) {
  if (n == 1) return a[0][0];
  if (n == 2) {
    const double tr = a[0][0] + a[1][1];
    const double det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
    return 0.5 * tr + std::sqrt(std::max(0.0, 0.25 * tr * tr - det));
  }
  const double p1 = a[0][1] * a[0][1] + a[0][2] * a[0][2] + a[1][2] * a[1][2];
  const double q = (a[0][0] + a[1][1] + a[2][2]) / 3.0;
  if (p1 == 0.0) return std::max({a[0][0], a[1][1], a[2][2]});
  const double p2 = (a[0][0] - q) * (a[0][0] - q) + (a[1][1] - q) * (a[1][1] - q) +
                    (a[2][2] - q) * (a[2][2] - q) + 2.0 * p1;
  const double p = std::sqrt(p2 / 6.0);
  std::array<std::array<double, 3>, 3> b{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) b[i][j] = (a[i][j] - (i == j ? q : 0.0)) / p;
  const double det_b = b[0][0] * (b[1][1] * b[2][2] - b[1][2] * b[2][1]) -
                       b[0][1] * (b[1][0] * b[2][2] - b[1][2] * b[2][0]) +
                       b[0][2] * (b[1][0] * b[2][1] - b[1][1] * b[2][0]);
  const double r = std::clamp(det_b / 2.0, -1.0, 1.0);
  return q + 2.0 * p * std::cos(std::acos(r) / 3.0);
}

bool touches_wall(const Grid& g, const std::array<int, 3>& q) {
  for (int a = 0; a < g.dim(); ++a) {
    if (q[a] == 0 || q[a] == g.cells(a) - 1) return true;
  }
  return false;
}

}  // namespace

VelocityNorms velocity_norms(const Field& v) {
  const Grid& g = v.grid();
  const int m = g.dim();
  if (v.components() != m) throw InvalidArgument("velocity_norms: v needs dim components");
  const auto jac = velocity_gradient(v);
  VelocityNorms out;
  double l3 = 0.0;
  double grad_l3 = 0.0;
  for (std::size_t cell = 0; cell < g.size(); ++cell) {
    double speed2 = 0.0;
    for (int b = 0; b < m; ++b) speed2 += v(cell, b) * v(cell, b);
    const double speed = std::sqrt(speed2);
    out.inf = std::max(out.inf, speed);
    l3 += speed2 * speed;

    // J[a][b] = d v_b / d x_a; its 2-norm is sqrt(max eig(J J^T))
    std::array<std::array<double, 3>, 3> jjt{};
    double frob2 = 0.0;
    for (int a = 0; a < m; ++a) {
      for (int c = 0; c < m; ++c) {
        double s = 0.0;
        for (int b = 0; b < m; ++b) s += jac[a][b](cell, 0) * jac[c][b](cell, 0);
        jjt[a][c] = s;
      }
      frob2 += jjt[a][a];
    }
    out.grad_inf = std::max(out.grad_inf, std::sqrt(std::max(0.0, max_eigenvalue_sym(jjt, m))));
    grad_l3 += frob2 * std::sqrt(frob2);
  }
  out.l3 = std::cbrt(l3 * g.cell_volume());
  out.grad_l3 = std::cbrt(grad_l3 * g.cell_volume());
  return out;
}

AdmissibilityCertificate check_admissible(const Field& v, double tol_div, double tol_bc) {
  const Grid& g = v.grid();
  AdmissibilityCertificate cert;
  cert.tol_div = tol_div;
  cert.tol_bc = tol_bc;
  cert.norms = velocity_norms(v);
  const Field div = divergence(v, g);
  for (std::size_t cell = 0; cell < g.size(); ++cell) {
    const auto q = g.coords(cell);
    const double d = std::abs(div(cell, 0));
    if (!touches_wall(g, q)) {
      cert.max_div = std::max(cert.max_div, d);
      continue;
    }
    for (int a = 0; a < g.dim(); ++a) {
      for (int side = 0; side < 2; ++side) {
        if (q[a] != (side == 0 ? 0 : g.cells(a) - 1)) continue;
        const double trace = g.spacing(a) * d;
        if (!cert.worst_face || trace > cert.max_normal_trace) {
          cert.max_normal_trace = trace;
          cert.worst_face = FaceLocation{a, side, cell};
        }
      }
    }
  }
  return cert;
}

AdmissibleField stream_function_field_2d(const Field& psi) {
  const Grid& g = psi.grid();
  if (g.dim() != 2) throw InvalidArgument("stream_function_field_2d: need a 2D grid");
  if (psi.components() != 1) throw InvalidArgument("stream_function_field_2d: psi must be scalar");
  const Field dx = derivative(psi, 0, Parity::odd);
  const Field dy = derivative(psi, 1, Parity::odd);
  Field v(g, 2);
  for (std::size_t cell = 0; cell < g.size(); ++cell) {
    v(cell, 0) = dy(cell, 0);
    v(cell, 1) = -dx(cell, 0);
  }
  auto cert = check_admissible(v);
  return {std::move(v), cert};
}

AdmissibleField vector_potential_field_3d(const Field& potential) {
  const Grid& g = potential.grid();
  if (g.dim() != 3) throw InvalidArgument("vector_potential_field_3d: need a 3D grid");
  if (potential.components() != 3) throw InvalidArgument("vector_potential_field_3d: A needs 3 components");
  std::array<Field, 3> a{component(potential, 0), component(potential, 1), component(potential, 2)};
  // d_axis A_b, every such pair has axis != b so the ghost is odd
  auto d = [&](int axis, int b) { return derivative(a[b], axis, Parity::odd); };
  const Field d1a2 = d(1, 2), d2a1 = d(2, 1), d2a0 = d(2, 0), d0a2 = d(0, 2), d0a1 = d(0, 1),
              d1a0 = d(1, 0);
  Field v(g, 3);
  for (std::size_t cell = 0; cell < g.size(); ++cell) {
    v(cell, 0) = d1a2(cell, 0) - d2a1(cell, 0);
    v(cell, 1) = d2a0(cell, 0) - d0a2(cell, 0);
    v(cell, 2) = d0a1(cell, 0) - d1a0(cell, 0);
  }
  auto cert = check_admissible(v);
  return {std::move(v), cert};
}

VelocitySource VelocitySource::zero(const Grid& g) {
  VelocitySource s;
  s.kind_ = Kind::constant;
  s.grid_ = g;
  s.zero_ = true;
  Field v(g, g.dim());
  auto cert = check_admissible(v);
  s.static_ = AdmissibleField{std::move(v), cert};
  return s;
}

VelocitySource VelocitySource::constant(AdmissibleField field) {
  VelocitySource s;
  s.kind_ = Kind::constant;
  s.grid_ = field.v.grid();
  s.zero_ = max_abs(field.v) == 0.0;
  s.static_ = std::move(field);
  return s;
}

VelocitySource VelocitySource::trajectory(std::vector<double> times, std::vector<Field> snapshots) {
  if (times.empty() || times.size() != snapshots.size()) {
    throw InvalidArgument("velocity trajectory: need matching nonempty times and snapshots");
  }
  for (std::size_t i = 1; i < times.size(); ++i) {
    if (!(times[i] > times[i - 1])) throw InvalidArgument("velocity trajectory: times must increase");
    require_same_shape(snapshots[i], snapshots[0], "velocity trajectory");
  }
  if (snapshots[0].components() != snapshots[0].grid().dim()) {
    throw InvalidArgument("velocity trajectory: snapshots need dim components");
  }
  VelocitySource s;
  s.kind_ = Kind::trajectory;
  s.grid_ = snapshots[0].grid();
  s.zero_ = std::all_of(snapshots.begin(), snapshots.end(), [](const Field& f) { return max_abs(f) == 0.0; });
  s.times_ = std::move(times);
  s.snapshots_ = std::move(snapshots);
  return s;
}

VelocitySource VelocitySource::analytic(const Grid& g, Generator generator) {
  VelocitySource s;
  s.kind_ = Kind::analytic;
  s.grid_ = g;
  s.generator_ = std::move(generator);
  return s;
}

Field VelocitySource::at(double t) const {
  switch (kind_) {
    case Kind::constant:
      return static_->v;
    case Kind::analytic:
      return generator_(t);
    case Kind::trajectory:
      break;
  }
  if (t <= times_.front()) return snapshots_.front();
  if (t >= times_.back()) return snapshots_.back();
  const auto it = std::upper_bound(times_.begin(), times_.end(), t);
  const std::size_t hi = static_cast<std::size_t>(it - times_.begin());
  const std::size_t lo = hi - 1;
  const double w = (t - times_[lo]) / (times_[hi] - times_[lo]);
  Field out = snapshots_[lo];
  out *= 1.0 - w;
  out.axpy(w, snapshots_[hi]);
  return out;
}

Field VelocitySource::time_derivative(double t) const {
  if (kind_ == Kind::constant) return Field(grid_, grid_.dim());
  if (kind_ == Kind::analytic) {
    Field out = generator_(t + fd_step_);
    out -= generator_(t - fd_step_);
    out *= 0.5 / fd_step_;
    return out;
  }
  const std::size_t n = times_.size();
  if (n == 1) return Field(grid_, grid_.dim());
  // nodal central differences, interpolated linearly between samples
  auto nodal = [&](std::size_t k) {
    const std::size_t lo = k == 0 ? 0 : k - 1;
    const std::size_t hi = k + 1 == n ? k : k + 1;
    Field d = snapshots_[hi];
    d -= snapshots_[lo];
    d *= 1.0 / (times_[hi] - times_[lo]);
    return d;
  };
  if (t <= times_.front()) return nodal(0);
  if (t >= times_.back()) return nodal(n - 1);
  const auto it = std::upper_bound(times_.begin(), times_.end(), t);
  const std::size_t hi = static_cast<std::size_t>(it - times_.begin());
  const std::size_t lo = hi - 1;
  const double w = (t - times_[lo]) / (times_[hi] - times_[lo]);
  Field out = nodal(lo);
  out *= 1.0 - w;
  out.axpy(w, nodal(hi));
  return out;
}

AdmissibilityCertificate VelocitySource::certificate(double t, double tol_div, double tol_bc) const {
  if (kind_ == Kind::constant && static_->certificate.tol_div == tol_div &&
      static_->certificate.tol_bc == tol_bc) {
    return static_->certificate;
  }
  return check_admissible(at(t), tol_div, tol_bc);
}

}  // namespace ismf
