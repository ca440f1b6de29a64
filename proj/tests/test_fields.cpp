#include <cmath>

#include "doctest.h"
#include "helpers.hpp"
#include "ismf/fields.hpp"
#include "ismf/presets.hpp"

using namespace ismf;
using ismf::testing::pi;

namespace {

Field one_vector(const Grid& g, std::array<double, 3> value) {
  Field f(g, 3);
  for (std::size_t cell = 0; cell < g.size(); ++cell) f.set_vec3(cell, value);
  return f;
}

}  // namespace

TEST_CASE("normalize_sphere examples") {
  const Grid g({1.0}, {4});
  const SpinField a = normalize_sphere(one_vector(g, {0, 0, 2}));
  CHECK(a.field()(0, 2) == 1.0);
  const SpinField b = normalize_sphere(one_vector(g, {3, 4, 0}));
  CHECK(b.field()(1, 0) == doctest::Approx(0.6).epsilon(1e-15));
  CHECK(b.field()(1, 1) == doctest::Approx(0.8).epsilon(1e-15));
  Field zero = one_vector(g, {1, 0, 0});
  zero.set_vec3(2, {0, 0, 0});
  try {
    normalize_sphere(zero);
    FAIL("expected DegenerateData");
  } catch (const DegenerateData& e) {
    CHECK(e.cell() == 2);
  }
}

TEST_CASE("normalize_sphere is idempotent bit for bit") {
  const Grid g({1.0, 1.0}, {8, 8});
  const SpinField once = normalize_sphere(testing::random_field(g, 3, 11));
  const SpinField twice = normalize_sphere(once.field());
  CHECK(testing::max_abs_diff(once.field(), twice.field()) == 0.0);
  CHECK(once.sphere_drift() <= 1e-15);
}

TEST_CASE("spin fields validate their constraint") {
  const Grid g({1.0}, {4});
  CHECK_THROWS_AS(SpinField(one_vector(g, {0, 0, 2}), SphereMode::exact_sphere), InvalidArgument);
  CHECK_THROWS_AS(SpinField(one_vector(g, {0, 0, 1.5}), SphereMode::ball), InvalidArgument);
  CHECK_NOTHROW(SpinField(one_vector(g, {0, 0.5, 0}), SphereMode::ball));
  CHECK_THROWS_AS(SpinField(Field(g, 2), SphereMode::ball), InvalidArgument);
}

TEST_CASE("stream function fields are admissible") {
  const Grid g({1.0, 1.0}, {64, 64});
  const AdmissibleField zero = stream_function_field_2d(Field(g, 1));
  CHECK(max_abs(zero.v) == 0.0);
  CHECK(zero.certificate.max_div == 0.0);
  CHECK(zero.certificate.max_normal_trace == 0.0);
  CHECK(zero.certificate.pass());

  const AdmissibleField s11 = stream_function_field_2d(sine_stream_function(g, 1, 1));
  CHECK(s11.certificate.max_div <= 1e-12);
  CHECK(s11.certificate.max_normal_trace <= 1e-10);
  CHECK(s11.certificate.pass());

  // |grad psi| of sin(2 pi x) sin(pi y) peaks at 2 pi on the line x = 0
  const AdmissibleField s21 = stream_function_field_2d(sine_stream_function(g, 2, 1));
  CHECK(s21.certificate.pass());
  const double e64 = std::abs(s21.certificate.norms.inf - 2.0 * pi);
  const Grid g2({1.0, 1.0}, {128, 128});
  const double e128 =
      std::abs(stream_function_field_2d(sine_stream_function(g2, 2, 1)).certificate.norms.inf - 2.0 * pi);
  CHECK(e64 < 0.02);
  CHECK(e128 < e64);
  CHECK_THROWS_AS(stream_function_field_2d(Field(Grid({1.0}, {8}), 1)), InvalidArgument);
}

TEST_CASE("vector potential fields extrude the stream construction") {
  const Grid g3({1.0, 1.0, 1.0}, {12, 12, 6});
  const Grid g2({1.0, 1.0}, {12, 12});
  CHECK(max_abs(vector_potential_field_3d(Field(g3, 3)).v) == 0.0);

  const Field psi2 = sine_stream_function(g2, 1, 1);
  Field a(g3, 3);
  for (std::size_t cell = 0; cell < g3.size(); ++cell) {
    const auto ix = g3.coords(cell);
    a(cell, 2) = psi2(g2.flat(ix[0], ix[1]), 0);
  }
  const AdmissibleField v3 = vector_potential_field_3d(a);
  CHECK(v3.certificate.max_div <= 1e-10);
  CHECK(v3.certificate.max_normal_trace <= 1e-10);
  const AdmissibleField v2 = stream_function_field_2d(psi2);
  double worst = 0.0;
  for (std::size_t cell = 0; cell < g3.size(); ++cell) {
    const auto ix = g3.coords(cell);
    const std::size_t c2 = g2.flat(ix[0], ix[1]);
    worst = std::max(worst, std::abs(v3.v(cell, 0) - v2.v(c2, 0)));
    worst = std::max(worst, std::abs(v3.v(cell, 1) - v2.v(c2, 1)));
    worst = std::max(worst, std::abs(v3.v(cell, 2)));
  }
  CHECK(worst <= 1e-14);

  // a constant potential has no interior curl
  const Field constant = testing::sample(g3, 3, [](const auto&, int c) { return 1.0 + c; });
  CHECK(testing::max_abs_diff(vector_potential_field_3d(constant).v, Field(g3, 3), 1) <= 1e-14);
  CHECK_THROWS_AS(vector_potential_field_3d(Field(g2, 3)), InvalidArgument);
}

TEST_CASE("check_admissible examples") {
  const Grid g({1.0, 1.0}, {16, 16});
  const auto zero = check_admissible(Field(g, 2));
  CHECK(zero.pass());
  CHECK(zero.max_div == 0.0);

  const Field uniform = testing::sample(g, 2, [](const auto&, int c) { return c == 0 ? 1.0 : 0.0; });
  const auto cert = check_admissible(uniform);
  CHECK(cert.max_div == 0.0);
  CHECK_FALSE(cert.pass());
  CHECK(cert.max_normal_trace > 0.1);
  REQUIRE(cert.worst_face.has_value());
  CHECK(cert.worst_face->axis == 0);
  CHECK(check_admissible(uniform).norms.inf == 1.0);
}

TEST_CASE("cross product identities") {
  const Grid g({1.0, 1.0}, {6, 6});
  const Field e3 = cross(one_vector(g, {1, 0, 0}), one_vector(g, {0, 1, 0}));
  CHECK(testing::max_abs_diff(e3, one_vector(g, {0, 0, 1})) == 0.0);

  const Field a = testing::random_field(g, 3, 21);
  const Field b = testing::random_field(g, 3, 22);
  const Field c = testing::random_field(g, 3, 23);
  CHECK(max_abs(cross(a, a)) == 0.0);

  const Field lhs = cross(a, cross(b, c));
  const Field ac = dot(a, c);
  const Field ab = dot(a, b);
  double worst = 0.0;
  for (std::size_t cell = 0; cell < g.size(); ++cell) {
    for (int k = 0; k < 3; ++k) {
      const double rhs = ac(cell, 0) * b(cell, k) - ab(cell, 0) * c(cell, k);
      worst = std::max(worst, std::abs(lhs(cell, k) - rhs));
    }
  }
  CHECK(worst <= 1e-13);

  const Field axb = cross(a, b);
  CHECK(max_abs(dot(axb, a)) <= 1e-13);
  CHECK(max_abs(dot(axb, b)) <= 1e-13);
  CHECK_THROWS_AS(cross(a, Field(g, 2)), InvalidArgument);
}

TEST_CASE("velocity sources interpolate and difference in time") {
  const Grid g({1.0, 1.0}, {16, 16});
  const Field psi = sine_stream_function(g, 1, 1);
  // v(t) = sin(t) v0: the central difference of dv/dt converges at second order
  const AdmissibleField v0 = stream_function_field_2d(psi);
  auto error = [&](double step) {
    std::vector<double> times;
    std::vector<Field> snaps;
    for (int i = 0; i <= static_cast<int>(std::lround(2.0 / step)); ++i) {
      times.push_back(i * step);
      snaps.push_back(std::sin(i * step) * v0.v);
    }
    const VelocitySource v = VelocitySource::trajectory(times, snaps);
    return testing::max_abs_diff(v.time_derivative(1.0), std::cos(1.0) * v0.v);
  };
  const double e1 = error(0.1);
  const double e2 = error(0.05);
  CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.1));

  const VelocitySource lin = VelocitySource::trajectory({0.0, 1.0}, {Field(g, 2), v0.v});
  CHECK(testing::max_abs_diff(lin.at(0.25), 0.25 * v0.v) <= 1e-15);
  CHECK(lin.certificate(0.5).pass());
  CHECK_THROWS_AS(VelocitySource::trajectory({1.0, 0.0}, {v0.v, v0.v}), InvalidArgument);
  CHECK(VelocitySource::zero(g).is_zero());
}

TEST_CASE("presets") {
  const Grid g({1.0, 1.0}, {8, 8});
  CHECK(make_initial_data("constant(z)", g).field()(5, 2) == 1.0);
  CHECK(make_initial_data("constant(3,4,0)", g).field()(5, 1) == doctest::Approx(0.8));
  CHECK(make_initial_data("tilted-cosine(0.5,1)", g).sphere_drift() <= 1e-15);
  const SpinField r1 = make_initial_data("random-smooth(7,3)", g);
  const SpinField r2 = make_initial_data("random-smooth(7,3)", g);
  CHECK(testing::max_abs_diff(r1.field(), r2.field()) == 0.0);
  CHECK_THROWS_AS(make_initial_data("nonsense(1)", g), ConfigError);
  CHECK_THROWS_AS(make_initial_data("tilted-cosine(0.5", g), ConfigError);
  CHECK_THROWS_AS(make_velocity("psi-sine(1,1)", Grid({1.0}, {8})), ConfigError);
  CHECK(make_velocity("psi-sine(1,1)", g).certificate.pass());
  CHECK(make_velocity("zero", g).certificate.norms.inf == 0.0);
}
