#include "ismf/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <sstream>

namespace ismf {

namespace {

double eigenvalue_of(const Grid& g, const std::array<int, 3>& k) {
  double lambda = 1.0;
  for (int a = 0; a < g.dim(); ++a) {
    const double w = k[a] * std::numbers::pi / g.extent(a);
    lambda += w * w;
  }
  return lambda;
}

}  // namespace

SpectralBasis::SpectralBasis(const Grid& g, std::size_t n) : grid_(g) {
  if (n == 0 || n > g.size()) {
    std::ostringstream os;
    os << "build_basis: mode count " << n << " must be in [1, " << g.size() << "]";
    throw InvalidArgument(os.str());
  }
  struct Candidate {
    std::array<int, 3> k;
    double lambda;
  };
  // enumeration order is lexicographic, so a stable sort on eigenvalue
  // leaves ties in lexicographic order
  std::vector<Candidate> all;
  all.reserve(g.size());
  for (int k0 = 0; k0 < g.cells(0); ++k0)
    for (int k1 = 0; k1 < g.cells(1); ++k1)
      for (int k2 = 0; k2 < g.cells(2); ++k2) {
        const std::array<int, 3> k{k0, k1, k2};
        all.push_back({k, eigenvalue_of(g, k)});
      }
  std::stable_sort(all.begin(), all.end(), [](const Candidate& a, const Candidate& b) {
    return a.lambda < b.lambda * (1.0 - 1e-13);
  });
  all.resize(n);

  samples_.assign(n * g.size(), 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    wavenumbers_.push_back(all[i].k);
    eigenvalues_.push_back(all[i].lambda);
    double* out = samples_.data() + i * g.size();
    for (std::size_t cell = 0; cell < g.size(); ++cell) {
      const auto x = g.position(cell);
      double value = 1.0;
      for (int a = 0; a < g.dim(); ++a) {
        const int k = all[i].k[a];
        const double norm = k == 0 ? std::sqrt(1.0 / g.extent(a)) : std::sqrt(2.0 / g.extent(a));
        value *= norm * std::cos(k * std::numbers::pi * x[a] / g.extent(a));
      }
      out[cell] = value;
    }
  }
}

std::size_t SpectralBasis::index_of(const std::array<int, 3>& k) const {
  const auto it = std::find(wavenumbers_.begin(), wavenumbers_.end(), k);
  return static_cast<std::size_t>(it - wavenumbers_.begin());
}

void SpectralBasis::write_csv(std::ostream& os) const {
  os << "index,k0,k1,k2,eigenvalue\n" << std::setprecision(17);
  for (std::size_t i = 0; i < size(); ++i) {
    os << i << ',' << wavenumbers_[i][0] << ',' << wavenumbers_[i][1] << ',' << wavenumbers_[i][2] << ','
       << eigenvalues_[i] << '\n';
  }
}

double SpectralState::norm_sq() const {
  double s = 0.0;
  for (double x : coeffs) s += x * x;
  return s;
}

bool SpectralState::all_finite() const {
  return std::all_of(coeffs.begin(), coeffs.end(), [](double x) { return std::isfinite(x); });
}

SpectralState analyze(const Field& f, const SpectralBasis& basis) {
  require_on_grid(f, basis.grid(), "analyze");
  if (f.components() != 3) throw InvalidArgument("analyze: need 3 components");
  const std::size_t n = basis.size();
  const std::size_t cells = f.cells();
  const double vol = basis.grid().cell_volume();
  SpectralState s;
  s.coeffs.assign(n * 3, 0.0);
  const auto values = f.values();
  for (std::size_t k = 0; k < n; ++k) {
    const auto mode = basis.mode(k);
    double acc[3] = {0.0, 0.0, 0.0};
    for (std::size_t cell = 0; cell < cells; ++cell) {
      const double m = mode[cell];
      acc[0] += m * values[cell * 3];
      acc[1] += m * values[cell * 3 + 1];
      acc[2] += m * values[cell * 3 + 2];
    }
    for (int c = 0; c < 3; ++c) s(k, c) = acc[c] * vol;
  }
  return s;
}

Field synthesize(const SpectralState& s, const SpectralBasis& basis) {
  if (s.modes() != basis.size() || s.coeffs.size() % 3 != 0) {
    throw InvalidArgument("synthesize: coefficient count does not match the basis");
  }
  Field f(basis.grid(), 3);
  auto values = f.values();
  const std::size_t cells = f.cells();
  for (std::size_t k = 0; k < basis.size(); ++k) {
    const auto mode = basis.mode(k);
    const double g0 = s(k, 0), g1 = s(k, 1), g2 = s(k, 2);
    if (g0 == 0.0 && g1 == 0.0 && g2 == 0.0) continue;
    for (std::size_t cell = 0; cell < cells; ++cell) {
      const double m = mode[cell];
      values[cell * 3] += g0 * m;
      values[cell * 3 + 1] += g1 * m;
      values[cell * 3 + 2] += g2 * m;
    }
  }
  return f;
}

SpectralState spectral_laplacian(const SpectralState& s, const SpectralBasis& basis) {
  SpectralState out = s;
  for (std::size_t k = 0; k < basis.size(); ++k) {
    const double w = -(basis.eigenvalue(k) - 1.0);
    for (int c = 0; c < 3; ++c) out(k, c) *= w;
  }
  return out;
}

double spectral_energy(const SpectralState& s, const SpectralBasis& basis, int power) {
  double sum = 0.0;
  for (std::size_t k = 0; k < basis.size(); ++k) {
    const double w = std::pow(basis.eigenvalue(k) - 1.0, power);
    for (int c = 0; c < 3; ++c) sum += w * s(k, c) * s(k, c);
  }
  return sum;
}

}  // namespace ismf
