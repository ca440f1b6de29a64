#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace ismf {

/// Raised when operands do not live on the same grid or have the wrong shape.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Cell-centered box discretization of [0,L_0]x...x[0,L_{m-1}].
///
/// Cells are stored row-major with axis 0 slowest. Unused axes (for m < 3)
/// have one cell so that loops can always run over three indices.
class Grid {
 public:
  Grid() = default;
  Grid(std::vector<double> extents, std::vector<int> cells);

  int dim() const { return dim_; }
  double extent(int axis) const { return extent_[axis]; }
  int cells(int axis) const { return cells_[axis]; }
  double spacing(int axis) const { return spacing_[axis]; }
  std::size_t stride(int axis) const { return stride_[axis]; }
  std::size_t size() const { return size_; }
  double cell_volume() const { return volume_; }
  double min_spacing() const;
  double min_extent() const;

  /// Coordinate of the center of cell i along axis.
  double center(int axis, int i) const { return (i + 0.5) * spacing_[axis]; }
  std::array<int, 3> coords(std::size_t cell) const;
  std::size_t flat(int i, int j = 0, int k = 0) const {
    return static_cast<std::size_t>(i) * stride_[0] + static_cast<std::size_t>(j) * stride_[1] +
           static_cast<std::size_t>(k);
  }
  /// Position of the cell center, padded with zeros past dim().
  std::array<double, 3> position(std::size_t cell) const;

  bool operator==(const Grid& other) const = default;

 private:
  int dim_ = 0;
  std::array<double, 3> extent_{1.0, 1.0, 1.0};
  std::array<int, 3> cells_{1, 1, 1};
  std::array<double, 3> spacing_{1.0, 1.0, 1.0};
  std::array<std::size_t, 3> stride_{1, 1, 1};
  std::size_t size_ = 0;
  double volume_ = 0.0;
};

/// Multi-component field sampled at cell centers. Values are interleaved:
/// data[cell * components + c].
class Field {
 public:
  Field() = default;
  Field(const Grid& grid, int components, double fill = 0.0);

  const Grid& grid() const { return grid_; }
  int components() const { return components_; }
  std::size_t cells() const { return grid_.size(); }

  double& operator()(std::size_t cell, int c) { return data_[cell * components_ + c]; }
  double operator()(std::size_t cell, int c) const { return data_[cell * components_ + c]; }

  std::span<double> values() { return data_; }
  std::span<const double> values() const { return data_; }
  std::array<double, 3> vec3(std::size_t cell) const;
  void set_vec3(std::size_t cell, const std::array<double, 3>& value);

  bool all_finite() const;
  bool same_shape(const Field& other) const {
    return components_ == other.components_ && grid_ == other.grid_;
  }

  Field& operator+=(const Field& other);
  Field& operator-=(const Field& other);
  Field& operator*=(double s);
  /// this += s * other
  Field& axpy(double s, const Field& other);

 private:
  Grid grid_;
  int components_ = 0;
  std::vector<double> data_;
};

Field operator+(Field a, const Field& b);
Field operator-(Field a, const Field& b);
Field operator*(double s, Field a);

/// Ghost-cell reflection rule across a wall.
enum class Parity { even, odd };

void require_same_shape(const Field& a, const Field& b, const char* what);
void require_on_grid(const Field& f, const Grid& g, const char* what);

/// Second-order Neumann Laplacian with even mirror ghosts, per component.
Field laplacian_neumann(const Field& f, const Grid& g);

/// Centered first derivative along one axis; `parity` chooses the ghost rule
/// for every component.
Field derivative(const Field& f, int axis, Parity parity);

/// Centered gradient with even mirror ghosts; one field per axis, each with
/// the same component count as f.
std::vector<Field> gradient(const Field& f, const Grid& g);

/// Centered velocity gradient: entry [a][b] is d v_b / d x_a. The normal
/// component of v uses odd ghosts, tangential components even ghosts.
std::vector<std::vector<Field>> velocity_gradient(const Field& v);

/// Centered divergence with odd ghosts for the normal component of v.
Field divergence(const Field& v, const Grid& g);

/// Skew-symmetric advection 1/2 (v.grad f + div(v f)).
Field advect(const Field& v, const Field& f, const Grid& g);

/// Plain centered transport v.grad f.
Field transport(const Field& v, const Field& f, const Grid& g);

/// Midpoint rule for a scalar field.
double integrate(const Field& f, const Grid& g);

/// Sum over cells and components of f*g times the cell volume.
double inner(const Field& a, const Field& b);
double l2_norm_sq(const Field& f);

/// Discrete Dirichlet energy sum_faces |f_{i+1}-f_i|^2/h^2 * vol; equals
/// -<f, laplacian_neumann(f)> exactly.
double dirichlet_energy(const Field& f);

/// Pointwise gradient energy density matching the Neumann Laplacian:
/// 1/2 sum_axes (|D+ f|^2 + |D- f|^2). For unit vectors at every cell it
/// satisfies <f, lap f> = -density exactly.
Field energy_density(const Field& f);

/// Average of each coarse cell's children. Every fine cell count must be
/// an integer multiple of the coarse one on the same box.
Field restrict_average(const Field& fine, const Grid& coarse);

double max_abs(const Field& f);
/// max over cells of the Euclidean norm of the component vector.
double max_pointwise_norm(const Field& f);

}  // namespace ismf
