#pragma once

#include <array>
#include <iosfwd>
#include <vector>

#include "ismf/estimates.hpp"
#include "ismf/fields.hpp"

namespace ismf {

using Point = std::array<double, 3>;

enum class Interpolation { multilinear, cubic };

/// Value of a cell-centered field at an arbitrary point, using mirror
/// ghosts at walls. With `vector_parity` the component normal to a wall is
/// reflected oddly (velocity convention); otherwise all components are even.
/// Cubic uses Catmull-Rom weights per axis.
std::vector<double> interpolate(const Field& f, const Point& x, bool vector_parity,
                                Interpolation order = Interpolation::multilinear);

/// Regular seed lattice at the centers of a counts[0] x ... sub-division of the box.
///
/// With satellite_step > 0 every seed also carries 2 m satellite particles
/// at +-satellite_step along each axis, so that the flow Jacobian can be
/// differenced on a scale much finer than the lattice.
struct SeedLattice {
  int dim = 0;
  std::array<int, 3> counts{1, 1, 1};
  std::array<double, 3> spacing{0.0, 0.0, 0.0};
  std::vector<Point> points;
  double satellite_step = 0.0;

  /// satellite_fraction scales the smallest lattice spacing; 0 disables satellites.
  static SeedLattice regular(const Grid& g, const std::vector<int>& counts, double satellite_fraction = 1e-4);
  std::size_t flat(int i, int j = 0, int k = 0) const {
    return (static_cast<std::size_t>(i) * counts[1] + j) * counts[2] + k;
  }
};

struct FlowMap {
  SeedLattice seeds;
  double gamma = 1.0;
  std::vector<double> times;
  /// positions[sample][seed]
  std::vector<std::vector<Point>> positions;
  /// satellites[sample][seed * 2m + 2 axis + side], side 0 = minus; empty without satellites
  std::vector<std::vector<Point>> satellites;
  /// Largest distance outside the closed box seen during the run.
  double max_excursion = 0.0;

  std::size_t sample_index(double t) const;
  /// seed_ix, t, x[,y[,z]], det for every sample time listed (all if empty).
  void write_csv(std::ostream& os, const std::vector<double>& times_to_write = {}) const;
};

/// RK4 for d phi/dt = gamma v(phi, t), phi_0 = identity, with v
/// interpolated by `order` (Catmull-Rom by default). Positions are
/// recorded at 0, t_end and every sample time. Throws ConfinementError if
/// a particle leaves the box inflated by 1e-6 min L_j, AdmissibilityError
/// for an inadmissible v.
FlowMap integrate_flow(const VelocitySource& v, const SeedLattice& seeds, double gamma, double t_end, double dt,
                       const std::vector<double>& sample_times = {}, const Tolerances& tol = {},
                       Interpolation order = Interpolation::cubic);

struct JacobianDeterminant {
  std::vector<double> det;
  /// true where at least one direction used a one-sided difference
  std::vector<bool> one_sided;
  double max_deviation(bool interior_only = false) const;
};

enum class JacobianStencil {
  /// satellites when the flow map has them, lattice2 otherwise
  automatic,
  /// centered differences across each seed's satellites
  satellites,
  /// centered across lattice neighbours, second-order one-sided at the edge
  lattice2,
  /// five-point centered across lattice neighbours where available
  lattice4,
};

/// det of the finite-difference Jacobian of phi_t.
JacobianDeterminant jacobian_det(const FlowMap& fm, double t,
                                 JacobianStencil stencil = JacobianStencil::automatic);

/// Material-derivative residual per interior sample time.
struct GaugeResidual {
  std::vector<double> t;
  std::vector<double> max_residual;
  std::vector<double> rms_residual;
  /// largest |dt u + gamma v . grad u| seen at any seed and sample
  double scale = 0.0;
  double sup_max() const;
  /// sup_max / scale (0 when the material derivative vanishes)
  double relative() const { return scale > 0.0 ? sup_max() / scale : sup_max(); }
  double sup_rms() const;
};

/// || d/dt u(phi_t(x), t) - (dt u + gamma v . grad u)(phi_t(x), t) || over
/// seeds, d/dt by central differences of the pulled-back samples. `u` and
/// `dtu` are sampled at `times`, which must match the flow map's sample
/// times; throws InvalidArgument otherwise.
GaugeResidual gauge_material_derivative_check(const std::vector<double>& times, const std::vector<Field>& u,
                                              const std::vector<Field>& dtu, const FlowMap& fm,
                                              const VelocitySource& v, Interpolation order = Interpolation::multilinear);

}  // namespace ismf
