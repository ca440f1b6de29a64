#pragma once

#include <array>
#include <iosfwd>
#include <vector>

#include "ismf/grid.hpp"

namespace ismf {

/// Neumann eigenbasis of (Laplacian - I) on a box, sampled at cell centers.
///
/// Mode k has eigenvalue 1 + sum_j (k_j pi / L_j)^2 and the sampled shape
/// prod_j c_{k_j} cos(k_j pi x_j / L_j), with c_0 = 1/sqrt(L), c_k =
/// sqrt(2/L). For k_j < N_j these samples are orthonormal under the
/// midpoint rule (DCT-II structure). Modes are ordered by eigenvalue,
/// ties broken lexicographically in k.
class SpectralBasis {
 public:
  SpectralBasis(const Grid& g, std::size_t n);

  const Grid& grid() const { return grid_; }
  std::size_t size() const { return eigenvalues_.size(); }
  double eigenvalue(std::size_t i) const { return eigenvalues_[i]; }
  const std::vector<double>& eigenvalues() const { return eigenvalues_; }
  double max_eigenvalue() const { return eigenvalues_.back(); }
  const std::array<int, 3>& wavenumber(std::size_t i) const { return wavenumbers_[i]; }
  /// Sampled mode i at every cell.
  std::span<const double> mode(std::size_t i) const {
    return {samples_.data() + i * grid_.size(), grid_.size()};
  }
  /// Index of the mode with wavenumber k, or size() if it was truncated.
  std::size_t index_of(const std::array<int, 3>& k) const;

  /// Modes, wavenumbers and eigenvalues as CSV.
  void write_csv(std::ostream& os) const;

 private:
  Grid grid_;
  std::vector<double> eigenvalues_;
  std::vector<std::array<int, 3>> wavenumbers_;
  std::vector<double> samples_;
};

/// Coefficients g[k * 3 + c] of an R^3 field against a basis, and time t.
struct SpectralState {
  std::vector<double> coeffs;
  double t = 0.0;

  std::size_t modes() const { return coeffs.size() / 3; }
  double& operator()(std::size_t k, int c) { return coeffs[k * 3 + c]; }
  double operator()(std::size_t k, int c) const { return coeffs[k * 3 + c]; }
  /// sum |g|^2, equal to the L2 norm squared of the synthesized field.
  double norm_sq() const;
  bool all_finite() const;
};

/// P_n: coefficients <f_c, mode_k> by the midpoint rule.
SpectralState analyze(const Field& f, const SpectralBasis& basis);

/// sum_k g_k mode_k at every cell.
Field synthesize(const SpectralState& s, const SpectralBasis& basis);

/// Coefficients of the exact Laplacian of the synthesized function:
/// -(lambda_k - 1) g_k.
SpectralState spectral_laplacian(const SpectralState& s, const SpectralBasis& basis);

/// sum_k (lambda_k - 1)^p |g_k|^2: p = 1 gives the gradient energy, p = 2
/// the Laplacian energy of the synthesized function.
double spectral_energy(const SpectralState& s, const SpectralBasis& basis, int power);

}  // namespace ismf
