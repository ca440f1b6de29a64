#include <cmath>

#include "doctest.h"
#include "helpers.hpp"
#include "ismf/errors.hpp"
#include "ismf/galerkin.hpp"
#include "ismf/presets.hpp"

using namespace ismf;
using ismf::testing::pi;

namespace {

GalerkinConfig config(double eps, std::size_t modes, double dt, double t_end) {
  GalerkinConfig c;
  c.epsilon = eps;
  c.modes = modes;
  c.dt = dt;
  c.t_end = t_end;
  return c;
}

double coeff_distance(const SpectralState& a, const SpectralState& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.coeffs.size(); ++i) d = std::max(d, std::abs(a.coeffs[i] - b.coeffs[i]));
  return d;
}

}  // namespace

TEST_CASE("clip_J examples") {
  const Grid g({1.0}, {4});
  Field u(g, 3);
  u.set_vec3(0, {0, 0, 2});
  u.set_vec3(1, {0.3, 0, 0});
  u.set_vec3(2, {3, 4, 0});
  const Field c = clip_J(u);
  CHECK(c.vec3(0) == std::array<double, 3>{0, 0, 1});
  CHECK(c.vec3(1) == std::array<double, 3>{0.3, 0, 0});
  CHECK(c(2, 0) == doctest::Approx(0.6));
  CHECK(c(2, 1) == doctest::Approx(0.8));
  CHECK_THROWS_AS(clip_J(Field(g, 2)), InvalidArgument);
}

TEST_CASE("a constant unit vector is stationary") {
  const Grid g({1.0, 1.0}, {16, 16});
  const SpectralBasis basis(g, 9);
  const SpinField u0 = make_initial_data("constant(z)", g);
  const VelocitySource still = VelocitySource::zero(g);
  const GalerkinSystem sys(basis, still, config(0.1, 9, 1e-3, 1.0));
  const SpectralState s = analyze(u0.field(), basis);
  const SpectralState d = sys.rhs(s, 0.0);
  for (double x : d.coeffs) CHECK(std::abs(x) <= 1e-14);

  const VelocitySource v = VelocitySource::constant(make_velocity("psi-sine(1,1)", g));
  GalerkinConfig cfg = config(0.1, 9, 1e-3, 0.2);
  const GalerkinResult r = run_galerkin(u0, v, cfg);
  CHECK(testing::max_abs_diff(r.snapshots.back(), u0.field()) <= 1e-10);
  CHECK(r.report.all_hard_pass());
}

TEST_CASE("a small single mode decays linearly to leading order") {
  const Grid g({1.0}, {64});
  const SpectralBasis basis(g, 8);
  const VelocitySource still = VelocitySource::zero(g);
  const GalerkinSystem sys(basis, still, config(0.2, 8, 1e-3, 1.0));
  for (double delta : {1e-2, 1e-3}) {
    SpectralState s;
    s.coeffs.assign(basis.size() * 3, 0.0);
    s(3, 1) = delta;
    const SpectralState d = sys.rhs(s, 0.0);
    CHECK(d(3, 1) == doctest::Approx(-0.2 * (basis.eigenvalue(3) - 1.0) * delta).epsilon(1e-12));
    // u parallel to lap u componentwise: the cross term vanishes
    double nonlinear = 0.0;
    for (double x : sys.nonlinear_part(s, 0.0).coeffs) nonlinear = std::max(nonlinear, std::abs(x));
    CHECK(nonlinear <= delta * delta);
  }
}

TEST_CASE("the projected cross term is orthogonal to the state") {
  const Grid g({1.0, 1.0}, {16, 16});
  const SpectralBasis basis(g, 12);
  GalerkinConfig cfg = config(0.1, 12, 1e-3, 1.0);
  cfg.use_clip = false;
  const VelocitySource still = VelocitySource::zero(g);
  const GalerkinSystem sys(basis, still, cfg);
  const SpectralState s = analyze(make_initial_data("random-smooth(3,2)", g).field(), basis);
  const SpectralState n = sys.nonlinear_part(s, 0.0);
  double pairing = 0.0;
  for (std::size_t i = 0; i < s.coeffs.size(); ++i) pairing += n.coeffs[i] * s.coeffs[i];
  double scale = 0.0;
  for (double x : n.coeffs) scale += x * x;
  CHECK(std::abs(pairing) <= 1e-12 * std::sqrt(scale * s.norm_sq()));
}

TEST_CASE("zero state stays zero") {
  const Grid g({1.0}, {16});
  const SpectralBasis basis(g, 5);
  const VelocitySource still = VelocitySource::zero(g);
  const GalerkinSystem sys(basis, still, config(0.1, 5, 1e-3, 1.0));
  SpectralState s;
  s.coeffs.assign(15, 0.0);
  for (double x : sys.step_rk4(s, 1e-3).coeffs) CHECK(x == 0.0);
}

TEST_CASE("pure diffusion matches the exponential") {
  const Grid g({1.0, 1.0}, {16, 16});
  const SpectralBasis basis(g, 10);
  GalerkinConfig cfg = config(0.3, 10, 1e-3, 1.0);
  cfg.use_clip = false;
  cfg.use_cross = false;
  cfg.use_advection = false;
  const VelocitySource still = VelocitySource::zero(g);
  const GalerkinSystem sys(basis, still, cfg);
  const SpectralState s = analyze(testing::random_field(g, 3, 61), basis);
  // RK4 misses exp(z) by about z^5/120, i.e. 8e-8 at z = -0.1; 0.06 keeps it below 1e-8
  const double dt = 0.06 / (cfg.epsilon * basis.max_eigenvalue());
  const SpectralState next = sys.step_rk4(s, dt);
  double worst = 0.0;
  for (std::size_t k = 0; k < basis.size(); ++k) {
    for (int c = 0; c < 3; ++c) {
      const double exact = s(k, c) * std::exp(-cfg.epsilon * (basis.eigenvalue(k) - 1.0) * dt);
      worst = std::max(worst, std::abs(next(k, c) - exact) / std::max(std::abs(exact), 1e-300));
    }
  }
  CHECK(worst <= 1e-8);
}

TEST_CASE("RK4 local order") {
  const Grid g({1.0, 1.0}, {16, 16});
  const SpectralBasis basis(g, 9);
  const VelocitySource v = VelocitySource::constant(make_velocity("psi-sine(1,1)", g));
  const GalerkinSystem sys(basis, v, config(0.1, 9, 1e-3, 1.0));
  const SpectralState s = analyze(make_initial_data("tilted-cosine(0.8,1)", g).field(), basis);
  auto defect = [&](double dt) {
    const SpectralState one = sys.step_rk4(s, dt);
    const SpectralState two = sys.step_rk4(sys.step_rk4(s, dt / 2), dt / 2);
    return coeff_distance(one, two);
  };
  const double d1 = defect(0.02);
  const double d2 = defect(0.01);
  CHECK(std::log2(d1 / d2) >= 3.8);
}

TEST_CASE("L2 law on the 1D tilted cosine run") {
  const Grid g({1.0}, {64});
  const GalerkinResult r =
      run_galerkin(make_initial_data("tilted-cosine(0.5,1)", g), VelocitySource::zero(g), config(0.1, 16, 1e-3, 1.0));
  const EstimateCheck* l2 = r.report.find("L2-law-3.3");
  REQUIRE(l2 != nullptr);
  CHECK(std::abs(l2->lhs.back() - l2->rhs.back()) / l2->rhs.back() <= 1e-6);
  CHECK(r.report.all_hard_pass());
  // v = 0: the H1 bound reduces to monotone gradient energy
  for (std::size_t i = 1; i < r.series.t.size(); ++i) {
    CHECK(r.series.grad_l2_sq[i] <= r.series.grad_l2_sq[0] * (1.0 + 1e-3));
  }
}

TEST_CASE("runs are deterministic") {
  const Grid g({1.0, 1.0}, {12, 12});
  const VelocitySource v = VelocitySource::constant(make_velocity("psi-sine(1,1)", g));
  const SpinField u0 = make_initial_data("random-smooth(5,2)", g);
  const GalerkinResult a = run_galerkin(u0, v, config(0.1, 9, 1e-3, 0.05));
  const GalerkinResult b = run_galerkin(u0, v, config(0.1, 9, 1e-3, 0.05));
  CHECK(coeff_distance(a.states.back(), b.states.back()) == 0.0);
}

TEST_CASE("guard, admissibility and config validation") {
  const Grid g({1.0, 1.0}, {16, 16});
  const SpinField u0 = make_initial_data("constant(z)", g);
  CHECK_THROWS_AS(run_galerkin(u0, VelocitySource::zero(g), config(0.1, 9, 10.0, 20.0)), InvalidArgument);
  CHECK_THROWS_AS(run_galerkin(u0, VelocitySource::zero(g), config(0.0, 9, 1e-3, 1.0)), InvalidArgument);
  CHECK_THROWS_AS(run_galerkin(u0, VelocitySource::zero(g), config(0.1, 0, 1e-3, 1.0)), InvalidArgument);

  Field uniform(g, 2);
  for (std::size_t cell = 0; cell < g.size(); ++cell) uniform(cell, 0) = 1.0;
  const VelocitySource bad = VelocitySource::trajectory({0.0, 1.0}, {uniform, uniform});
  CHECK_THROWS_AS(run_galerkin(u0, bad, config(0.1, 9, 1e-3, 0.1)), AdmissibilityError);

  GalerkinConfig loose = config(0.1, 9, 1.0, 200.0);
  loose.enforce_guard = false;
  const SpinField wavy = make_initial_data("random-smooth(1,3)", g);
  CHECK_THROWS_AS(run_galerkin(wavy, VelocitySource::zero(g), loose), BlowUp);
}
