#include <cmath>

#include "doctest.h"
#include "helpers.hpp"
#include "ismf/spectral.hpp"

using namespace ismf;
using ismf::testing::pi;

namespace {

SpectralState unit(std::size_t modes, std::size_t k, int c) {
  SpectralState s;
  s.coeffs.assign(modes * 3, 0.0);
  s(k, c) = 1.0;
  return s;
}

double eigen_residual(int n) {
  const Grid g({1.0, 1.0}, {n, n});
  const SpectralBasis basis(g, 10);
  const std::size_t k = basis.index_of({2, 1, 0});
  REQUIRE(k < basis.size());
  const Field f = synthesize(unit(basis.size(), k, 0), basis);
  Field r = laplacian_neumann(f, g);
  r.axpy(basis.eigenvalue(k) - 1.0, f);
  return max_abs(r);
}

}  // namespace

TEST_CASE("eigenvalues follow 1 + sum (k pi / L)^2") {
  const Grid line({pi}, {32});
  const SpectralBasis b1(line, 4);
  CHECK(b1.eigenvalue(0) == 1.0);
  CHECK(b1.wavenumber(2)[0] == 2);
  CHECK(b1.eigenvalue(2) == doctest::Approx(5.0).epsilon(1e-14));

  const Grid square({1.0, 1.0}, {16, 16});
  const SpectralBasis b2(square, 4);
  const double p2 = pi * pi;
  CHECK(b2.eigenvalue(0) == 1.0);
  CHECK(b2.eigenvalue(1) == doctest::Approx(1.0 + p2));
  CHECK(b2.eigenvalue(2) == doctest::Approx(1.0 + p2));
  CHECK(b2.eigenvalue(3) == doctest::Approx(1.0 + 2.0 * p2));
  // ties resolved lexicographically in k
  CHECK(b2.wavenumber(1) == std::array<int, 3>{0, 1, 0});
  CHECK(b2.wavenumber(2) == std::array<int, 3>{1, 0, 0});
  CHECK(b2.index_of({5, 5, 0}) == b2.size());
}

TEST_CASE("mode 0 is constant and the sampled modes are orthonormal") {
  const Grid g({1.0, 2.0}, {10, 12});
  const SpectralBasis basis(g, 20);
  const auto m0 = basis.mode(0);
  for (double x : m0) CHECK(x == doctest::Approx(m0[0]));
  double worst = 0.0;
  for (std::size_t i = 0; i < basis.size(); ++i) {
    for (std::size_t j = 0; j < basis.size(); ++j) {
      double s = 0.0;
      for (std::size_t cell = 0; cell < g.size(); ++cell) s += basis.mode(i)[cell] * basis.mode(j)[cell];
      s *= g.cell_volume();
      worst = std::max(worst, std::abs(s - (i == j ? 1.0 : 0.0)));
    }
  }
  CHECK(worst <= 1e-13);
}

TEST_CASE("analysis examples") {
  const Grid g({1.0, 1.0}, {16, 16});
  const SpectralBasis basis(g, 12);
  const SpectralState s5 = analyze(synthesize(unit(basis.size(), 5, 1), basis), basis);
  for (std::size_t k = 0; k < basis.size(); ++k) {
    for (int c = 0; c < 3; ++c) CHECK(std::abs(s5(k, c) - (k == 5 && c == 1 ? 1.0 : 0.0)) <= 1e-13);
  }

  Field z(g, 3);
  for (std::size_t cell = 0; cell < g.size(); ++cell) z(cell, 2) = 1.0;
  const SpectralState sz = analyze(z, basis);
  CHECK(sz(0, 2) == doctest::Approx(1.0));
  for (std::size_t i = 0; i < sz.coeffs.size(); ++i) {
    if (i != 2) CHECK(std::abs(sz.coeffs[i]) <= 1e-14);
  }

  const Field r = testing::random_field(g, 3, 31);
  CHECK(l2_norm_sq(synthesize(analyze(r, basis), basis)) <= l2_norm_sq(r) + 1e-12);
}

TEST_CASE("projection is idempotent, self-adjoint and satisfies Parseval") {
  const Grid g({1.0, 1.0}, {12, 12});
  const SpectralBasis basis(g, 15);
  CHECK(max_abs(synthesize(SpectralState{std::vector<double>(basis.size() * 3, 0.0)}, basis)) == 0.0);

  const Field f = testing::random_field(g, 3, 41);
  const Field h = testing::random_field(g, 3, 42);
  const SpectralState s = analyze(f, basis);
  const SpectralState round = analyze(synthesize(s, basis), basis);
  double worst = 0.0;
  for (std::size_t i = 0; i < s.coeffs.size(); ++i) worst = std::max(worst, std::abs(round.coeffs[i] - s.coeffs[i]));
  CHECK(worst <= 1e-12);

  const Field pf = synthesize(s, basis);
  const Field ph = synthesize(analyze(h, basis), basis);
  CHECK(std::abs(inner(pf, h) - inner(f, ph)) <= 1e-12);
  CHECK(std::abs(s.norm_sq() - l2_norm_sq(pf)) <= 1e-12);
}

TEST_CASE("cosine sums inside the truncation are reproduced exactly") {
  const Grid g({1.0, 1.0}, {16, 16});
  const SpectralBasis basis(g, 10);
  const Field f = testing::sample(g, 3, [](const auto& x, int c) {
    return 0.2 * c + std::cos(pi * x[0]) - 0.5 * std::cos(pi * x[0]) * std::cos(pi * x[1]);
  });
  CHECK(testing::max_abs_diff(synthesize(analyze(f, basis), basis), f) <= 1e-12);
}

TEST_CASE("sampled modes are discrete eigenfunctions to second order") {
  const double e32 = eigen_residual(32);
  const double e64 = eigen_residual(64);
  CHECK(e32 < 1.0);
  CHECK(e32 / e64 == doctest::Approx(4.0).epsilon(0.1));
}

TEST_CASE("spectral energies") {
  const Grid g({1.0}, {32});
  const SpectralBasis basis(g, 6);
  const SpectralState s = unit(basis.size(), 2, 0);
  CHECK(spectral_energy(s, basis, 1) == doctest::Approx(4.0 * pi * pi));
  CHECK(spectral_energy(s, basis, 2) == doctest::Approx(16.0 * pi * pi * pi * pi));
  const SpectralState lap = spectral_laplacian(s, basis);
  CHECK(lap(2, 0) == doctest::Approx(-4.0 * pi * pi));
}
