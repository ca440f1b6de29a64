#include <cmath>
#include <sstream>

#include "doctest.h"
#include "helpers.hpp"
#include "ismf/errors.hpp"
#include "ismf/flowmap.hpp"
#include "ismf/parabolic.hpp"
#include "ismf/presets.hpp"

using namespace ismf;
using ismf::testing::pi;

namespace {

double max_displacement(const FlowMap& fm) {
  double d = 0.0;
  for (const auto& sample : fm.positions) {
    for (std::size_t s = 0; s < sample.size(); ++s) {
      for (int a = 0; a < 3; ++a) d = std::max(d, std::abs(sample[s][a] - fm.seeds.points[s][a]));
    }
  }
  return d;
}

}  // namespace

TEST_CASE("interpolation reproduces cell values and linear data") {
  const Grid g({1.0, 1.0}, {8, 8});
  const Field f = testing::scalar(g, [](const auto& x) { return 2.0 * x[0] - x[1] + 0.5; });
  for (Interpolation order : {Interpolation::multilinear, Interpolation::cubic}) {
    CHECK(interpolate(f, g.position(g.flat(3, 4)), false, order)[0] == doctest::Approx(f(g.flat(3, 4), 0)));
    CHECK(interpolate(f, {0.4, 0.55, 0.0}, false, order)[0] == doctest::Approx(2.0 * 0.4 - 0.55 + 0.5));
  }
  // a mirrored velocity has zero normal component on the wall
  const Field v = make_velocity("psi-sine(1,1)", g).v;
  CHECK(interpolate(v, {0.0, 0.3, 0.0}, true)[0] == doctest::Approx(0.0));
  CHECK(interpolate(v, {0.4, 1.0, 0.0}, true, Interpolation::cubic)[1] == doctest::Approx(0.0));
}

TEST_CASE("zero velocity and zero gamma give the identity map") {
  const Grid g({1.0, 1.0}, {16, 16});
  const SeedLattice seeds = SeedLattice::regular(g, {5, 5});
  const FlowMap still = integrate_flow(VelocitySource::zero(g), seeds, 1.0, 1.0, 1e-2, {0.5});
  CHECK(max_displacement(still) == 0.0);
  const VelocitySource v = VelocitySource::constant(make_velocity("psi-sine(1,1)", g));
  const FlowMap frozen = integrate_flow(v, seeds, 0.0, 1.0, 1e-2, {0.5});
  CHECK(max_displacement(frozen) == 0.0);
  const JacobianDeterminant det = jacobian_det(frozen, 1.0, JacobianStencil::lattice2);
  for (double d : det.det) CHECK(d == doctest::Approx(1.0).epsilon(1e-12));
  // satellites sit 1e-4 lattice spacings apart, so rounding is amplified
  CHECK(jacobian_det(frozen, 1.0).max_deviation() <= 1e-10);
}

TEST_CASE("stream-field particles stay inside and converge in dt") {
  const Grid g({1.0, 1.0}, {64, 64});
  const VelocitySource v = VelocitySource::constant(make_velocity("psi-sine(1,1)", g));
  const SeedLattice seeds = SeedLattice::regular(g, {9, 9}, 0.0);
  const FlowMap coarse = integrate_flow(v, seeds, 1.0, 1.0, 1e-3);
  const FlowMap fine = integrate_flow(v, seeds, 1.0, 1.0, 5e-4);
  double drift = 0.0;
  for (std::size_t s = 0; s < seeds.points.size(); ++s) {
    for (int a = 0; a < 2; ++a) {
      drift = std::max(drift, std::abs(coarse.positions.back()[s][a] - fine.positions.back()[s][a]));
      CHECK(coarse.positions.back()[s][a] >= 0.0);
      CHECK(coarse.positions.back()[s][a] <= 1.0);
    }
  }
  CHECK(drift <= 1e-8);
  CHECK(coarse.max_excursion == 0.0);
}

TEST_CASE("the stream-field flow map preserves volume") {
  const Grid g({1.0, 1.0}, {128, 128});
  const VelocitySource v = VelocitySource::constant(make_velocity("psi-sine(1,1)", g));
  const SeedLattice seeds = SeedLattice::regular(g, {9, 9});
  const FlowMap fm = integrate_flow(v, seeds, 1.0, 0.5, 1e-3, {0.25});
  CHECK(jacobian_det(fm, 0.25).max_deviation() <= 1e-4);
  CHECK(jacobian_det(fm, 0.5, JacobianStencil::satellites).max_deviation() <= 1e-4);
  CHECK_THROWS_AS(jacobian_det(fm, 0.3), InvalidArgument);
}

TEST_CASE("rigid translation has a constant unit Jacobian") {
  FlowMap fm;
  const Grid g({1.0, 1.0}, {8, 8});
  fm.seeds = SeedLattice::regular(g, {4, 4}, 0.0);
  fm.times = {0.0, 1.0};
  fm.positions = {fm.seeds.points, fm.seeds.points};
  for (auto& p : fm.positions[1]) {
    p[0] += 0.01;
    p[1] -= 0.02;
  }
  const JacobianDeterminant det = jacobian_det(fm, 1.0, JacobianStencil::lattice2);
  CHECK(det.max_deviation() <= 1e-12);
  CHECK(det.one_sided.front());
}

TEST_CASE("material derivative check on trivial trajectories") {
  const Grid g({1.0, 1.0}, {16, 16});
  const SeedLattice seeds = SeedLattice::regular(g, {6, 6}, 0.0);
  const std::vector<double> times = {0.0, 0.05, 0.1, 0.15, 0.2};
  const VelocitySource v = VelocitySource::constant(make_velocity("psi-sine(1,1)", g));
  const FlowMap fm = integrate_flow(v, seeds, 1.0, 0.2, 1e-3, times);

  // a constant trajectory has no material derivative
  const Field c = make_initial_data("constant(z)", g).field();
  const std::vector<Field> same(times.size(), c);
  const std::vector<Field> zero(times.size(), Field(g, 3));
  const GaugeResidual r = gauge_material_derivative_check(times, same, zero, fm, v);
  CHECK(r.sup_max() <= 1e-14);

  CHECK_THROWS_AS(gauge_material_derivative_check({0.0, 0.05, 0.1}, {c, c, c}, {c, c, c}, fm, v), InvalidArgument);
}

TEST_CASE("with v = 0 the residual is the time-difference error") {
  const Grid g({1.0, 1.0}, {16, 16});
  const SpinField u0 = make_initial_data("tilted-cosine(0.7,1)", g);
  const VelocitySource v = VelocitySource::zero(g);
  const SeedLattice seeds = SeedLattice::regular(g, {5, 5}, 0.0);
  auto residual = [&](double ds) {
    ParabolicConfig cfg;
    cfg.epsilon = 0.25;
    cfg.dt = 1e-4;
    cfg.t_end = 0.04;
    for (int i = 1; i * ds < cfg.t_end - 1e-12; ++i) cfg.snapshot_times.push_back(i * ds);
    const ParabolicResult run = run_parabolic(u0, v, cfg);
    std::vector<Field> dtu;
    for (const Field& u : run.snapshots) dtu.push_back(parabolic_rhs(u, Field(g, 2), cfg.epsilon));
    const FlowMap fm = integrate_flow(v, seeds, 1.0, cfg.t_end, 1e-3, run.snapshot_times);
    return gauge_material_derivative_check(run.snapshot_times, run.snapshots, dtu, fm, v).sup_max();
  };
  const double r1 = residual(0.004);
  const double r2 = residual(0.002);
  CHECK(r1 / r2 == doctest::Approx(4.0).epsilon(0.15));
}

TEST_CASE("flow map CSV layout") {
  const Grid g({1.0, 1.0}, {8, 8});
  const SeedLattice seeds = SeedLattice::regular(g, {3, 3}, 0.0);
  const FlowMap fm = integrate_flow(VelocitySource::zero(g), seeds, 1.0, 0.1, 0.05);
  std::ostringstream os;
  fm.write_csv(os);
  std::istringstream is(os.str());
  std::string header;
  std::getline(is, header);
  CHECK(header == "seed_ix,t,x,y,det");
  int rows = 0;
  for (std::string line; std::getline(is, line);) ++rows;
  CHECK(rows == 2 * 9);
}

TEST_CASE("inadmissible velocities are refused") {
  const Grid g({1.0, 1.0}, {8, 8});
  Field uniform(g, 2);
  for (std::size_t cell = 0; cell < g.size(); ++cell) uniform(cell, 0) = 1.0;
  const VelocitySource bad = VelocitySource::trajectory({0.0, 1.0}, {uniform, uniform});
  CHECK_THROWS_AS(integrate_flow(bad, SeedLattice::regular(g, {2, 2}), 1.0, 1.0, 0.1), AdmissibilityError);
}
