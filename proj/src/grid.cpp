#include "ismf/grid.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace ismf {

Grid::Grid(std::vector<double> extents, std::vector<int> cells) {
  if (extents.size() != cells.size() || extents.empty() || extents.size() > 3) {
    throw InvalidArgument("grid: need 1 to 3 axes with matching extents and cell counts");
  }
  dim_ = static_cast<int>(extents.size());
  for (int a = 0; a < dim_; ++a) {
    if (!(extents[a] > 0.0) || !std::isfinite(extents[a])) {
      std::ostringstream os;
      os << "grid: extent along axis " << a << " must be positive, got " << extents[a];
      throw InvalidArgument(os.str());
    }
    if (cells[a] < 4) {
      std::ostringstream os;
      os << "grid: axis " << a << " needs at least 4 cells, got " << cells[a];
      throw InvalidArgument(os.str());
    }
    extent_[a] = extents[a];
    cells_[a] = cells[a];
    spacing_[a] = extents[a] / cells[a];
  }
  stride_[2] = 1;
  stride_[1] = static_cast<std::size_t>(cells_[2]);
  stride_[0] = stride_[1] * static_cast<std::size_t>(cells_[1]);
  size_ = stride_[0] * static_cast<std::size_t>(cells_[0]);
  volume_ = 1.0;
  for (int a = 0; a < dim_; ++a) volume_ *= spacing_[a];
}

double Grid::min_spacing() const {
  double h = spacing_[0];
  for (int a = 1; a < dim_; ++a) h = std::min(h, spacing_[a]);
  return h;
}

double Grid::min_extent() const {
  double l = extent_[0];
  for (int a = 1; a < dim_; ++a) l = std::min(l, extent_[a]);
  return l;
}

std::array<int, 3> Grid::coords(std::size_t cell) const {
  std::array<int, 3> c{};
  c[0] = static_cast<int>(cell / stride_[0]);
  cell %= stride_[0];
  c[1] = static_cast<int>(cell / stride_[1]);
  c[2] = static_cast<int>(cell % stride_[1]);
  return c;
}

std::array<double, 3> Grid::position(std::size_t cell) const {
  const auto c = coords(cell);
  std::array<double, 3> x{0.0, 0.0, 0.0};
  for (int a = 0; a < dim_; ++a) x[a] = center(a, c[a]);
  return x;
}

Field::Field(const Grid& grid, int components, double fill)
    : grid_(grid), components_(components), data_(grid.size() * components, fill) {
  if (components < 1) throw InvalidArgument("field: component count must be positive");
}

std::array<double, 3> Field::vec3(std::size_t cell) const {
  const double* p = &data_[cell * components_];
  return {p[0], p[1], p[2]};
}

void Field::set_vec3(std::size_t cell, const std::array<double, 3>& value) {
  double* p = &data_[cell * components_];
  p[0] = value[0];
  p[1] = value[1];
  p[2] = value[2];
}

bool Field::all_finite() const {
  return std::all_of(data_.begin(), data_.end(), [](double x) { return std::isfinite(x); });
}

Field& Field::operator+=(const Field& other) {
  require_same_shape(*this, other, "field +=");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
  return *this;
}

Field& Field::operator-=(const Field& other) {
  require_same_shape(*this, other, "field -=");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
  return *this;
}

Field& Field::operator*=(double s) {
  for (double& x : data_) x *= s;
  return *this;
}

Field& Field::axpy(double s, const Field& other) {
  require_same_shape(*this, other, "field axpy");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += s * other.data_[i];
  return *this;
}

Field operator+(Field a, const Field& b) { return a += b; }
Field operator-(Field a, const Field& b) { return a -= b; }
Field operator*(double s, Field a) { return a *= s; }

void require_same_shape(const Field& a, const Field& b, const char* what) {
  if (!a.same_shape(b)) {
    throw InvalidArgument(std::string(what) + ": field shapes differ");
  }
}

void require_on_grid(const Field& f, const Grid& g, const char* what) {
  if (!(f.grid() == g)) throw InvalidArgument(std::string(what) + ": field does not live on grid");
}

namespace {

// Centered difference along `axis` with per-component ghost parity; the
// result is scaled by `scale` (1/(2h) for a first derivative).
template <typename ParityOf>
Field centered_difference(const Field& f, int axis, ParityOf parity_of) {
  const Grid& g = f.grid();
  const int nc = f.components();
  Field out(g, nc);
  const int n = g.cells(axis);
  const std::size_t s = g.stride(axis);
  const double scale = 0.5 / g.spacing(axis);
  for (std::size_t cell = 0; cell < g.size(); ++cell) {
    const int q = g.coords(cell)[axis];
    for (int c = 0; c < nc; ++c) {
      const double sign = parity_of(c) == Parity::odd ? -1.0 : 1.0;
      const double here = f(cell, c);
      const double plus = q + 1 < n ? f(cell + s, c) : sign * here;
      const double minus = q > 0 ? f(cell - s, c) : sign * here;
      out(cell, c) = (plus - minus) * scale;
    }
  }
  return out;
}

}  // namespace

Field laplacian_neumann(const Field& f, const Grid& g) {
  require_on_grid(f, g, "laplacian_neumann");
  const int nc = f.components();
  Field out(g, nc);
  for (int a = 0; a < g.dim(); ++a) {
    const int n = g.cells(a);
    const std::size_t s = g.stride(a);
    const double inv_h2 = 1.0 / (g.spacing(a) * g.spacing(a));
    for (std::size_t cell = 0; cell < g.size(); ++cell) {
      const int q = g.coords(cell)[a];
      for (int c = 0; c < nc; ++c) {
        const double here = f(cell, c);
        const double plus = q + 1 < n ? f(cell + s, c) : here;
        const double minus = q > 0 ? f(cell - s, c) : here;
        out(cell, c) += (plus - 2.0 * here + minus) * inv_h2;
      }
    }
  }
  return out;
}

Field derivative(const Field& f, int axis, Parity parity) {
  if (axis < 0 || axis >= f.grid().dim()) throw InvalidArgument("derivative: axis out of range");
  return centered_difference(f, axis, [parity](int) { return parity; });
}

std::vector<Field> gradient(const Field& f, const Grid& g) {
  require_on_grid(f, g, "gradient");
  std::vector<Field> out;
  out.reserve(g.dim());
  for (int a = 0; a < g.dim(); ++a) out.push_back(derivative(f, a, Parity::even));
  return out;
}

std::vector<std::vector<Field>> velocity_gradient(const Field& v) {
  const Grid& g = v.grid();
  if (v.components() != g.dim()) throw InvalidArgument("velocity_gradient: v needs dim components");
  std::vector<std::vector<Field>> out(g.dim());
  for (int a = 0; a < g.dim(); ++a) {
    const Field d = centered_difference(v, a, [a](int c) { return c == a ? Parity::odd : Parity::even; });
    for (int b = 0; b < g.dim(); ++b) {
      Field comp(g, 1);
      for (std::size_t cell = 0; cell < g.size(); ++cell) comp(cell, 0) = d(cell, b);
      out[a].push_back(std::move(comp));
    }
  }
  return out;
}

Field divergence(const Field& v, const Grid& g) {
  require_on_grid(v, g, "divergence");
  if (v.components() != g.dim()) throw InvalidArgument("divergence: v needs dim components");
  Field out(g, 1);
  for (int a = 0; a < g.dim(); ++a) {
    const int n = g.cells(a);
    const std::size_t s = g.stride(a);
    const double scale = 0.5 / g.spacing(a);
    for (std::size_t cell = 0; cell < g.size(); ++cell) {
      const int q = g.coords(cell)[a];
      const double here = v(cell, a);
      const double plus = q + 1 < n ? v(cell + s, a) : -here;
      const double minus = q > 0 ? v(cell - s, a) : -here;
      out(cell, 0) += (plus - minus) * scale;
    }
  }
  return out;
}

Field transport(const Field& v, const Field& f, const Grid& g) {
  require_on_grid(v, g, "transport");
  require_on_grid(f, g, "transport");
  if (v.components() != g.dim()) throw InvalidArgument("transport: v needs dim components");
  Field out(g, f.components());
  for (int a = 0; a < g.dim(); ++a) {
    const Field d = derivative(f, a, Parity::even);
    for (std::size_t cell = 0; cell < g.size(); ++cell) {
      const double va = v(cell, a);
      for (int c = 0; c < f.components(); ++c) out(cell, c) += va * d(cell, c);
    }
  }
  return out;
}

Field advect(const Field& v, const Field& f, const Grid& g) {
  Field out = transport(v, f, g);
  const int nc = f.components();
  for (int a = 0; a < g.dim(); ++a) {
    // flux v_a f; its ghost is odd because v_a is odd across the a-walls
    Field flux(g, nc);
    for (std::size_t cell = 0; cell < g.size(); ++cell) {
      const double va = v(cell, a);
      for (int c = 0; c < nc; ++c) flux(cell, c) = va * f(cell, c);
    }
    out += derivative(flux, a, Parity::odd);
  }
  out *= 0.5;
  return out;
}

double integrate(const Field& f, const Grid& g) {
  require_on_grid(f, g, "integrate");
  double sum = 0.0;
  for (double x : f.values()) sum += x;
  return sum * g.cell_volume();
}

double inner(const Field& a, const Field& b) {
  require_same_shape(a, b, "inner");
  const auto x = a.values();
  const auto y = b.values();
  double sum = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) sum += x[i] * y[i];
  return sum * a.grid().cell_volume();
}

double l2_norm_sq(const Field& f) { return inner(f, f); }

double dirichlet_energy(const Field& f) {
  const Grid& g = f.grid();
  double sum = 0.0;
  for (int a = 0; a < g.dim(); ++a) {
    const int n = g.cells(a);
    const std::size_t s = g.stride(a);
    const double inv_h2 = 1.0 / (g.spacing(a) * g.spacing(a));
    double axis_sum = 0.0;
    for (std::size_t cell = 0; cell < g.size(); ++cell) {
      if (g.coords(cell)[a] + 1 >= n) continue;
      for (int c = 0; c < f.components(); ++c) {
        const double d = f(cell + s, c) - f(cell, c);
        axis_sum += d * d;
      }
    }
    sum += axis_sum * inv_h2;
  }
  return sum * g.cell_volume();
}

Field energy_density(const Field& f) {
  const Grid& g = f.grid();
  Field out(g, 1);
  for (int a = 0; a < g.dim(); ++a) {
    const int n = g.cells(a);
    const std::size_t s = g.stride(a);
    const double half_inv_h2 = 0.5 / (g.spacing(a) * g.spacing(a));
    for (std::size_t cell = 0; cell < g.size(); ++cell) {
      const int q = g.coords(cell)[a];
      double acc = 0.0;
      for (int c = 0; c < f.components(); ++c) {
        const double here = f(cell, c);
        const double dp = q + 1 < n ? f(cell + s, c) - here : 0.0;
        const double dm = q > 0 ? here - f(cell - s, c) : 0.0;
        acc += dp * dp + dm * dm;
      }
      out(cell, 0) += acc * half_inv_h2;
    }
  }
  return out;
}

Field restrict_average(const Field& fine, const Grid& coarse) {
  const Grid& g = fine.grid();
  if (g.dim() != coarse.dim()) throw InvalidArgument("restrict_average: dimensions differ");
  std::array<int, 3> ratio{1, 1, 1};
  for (int a = 0; a < g.dim(); ++a) {
    if (std::abs(g.extent(a) - coarse.extent(a)) > 1e-12 * g.extent(a) || g.cells(a) % coarse.cells(a) != 0) {
      throw InvalidArgument("restrict_average: grids are not nested");
    }
    ratio[a] = g.cells(a) / coarse.cells(a);
  }
  Field out(coarse, fine.components());
  const double w = 1.0 / (ratio[0] * ratio[1] * ratio[2]);
  for (std::size_t cell = 0; cell < g.size(); ++cell) {
    const auto q = g.coords(cell);
    const std::size_t target = coarse.flat(q[0] / ratio[0], q[1] / ratio[1], q[2] / ratio[2]);
    for (int c = 0; c < fine.components(); ++c) out(target, c) += w * fine(cell, c);
  }
  return out;
}

double max_abs(const Field& f) {
  double m = 0.0;
  for (double x : f.values()) m = std::max(m, std::abs(x));
  return m;
}

double max_pointwise_norm(const Field& f) {
  double m = 0.0;
  for (std::size_t cell = 0; cell < f.cells(); ++cell) {
    double s = 0.0;
    for (int c = 0; c < f.components(); ++c) s += f(cell, c) * f(cell, c);
    m = std::max(m, s);
  }
  return std::sqrt(m);
}

}  // namespace ismf
