#include <doctest.h>

#include <shrinkerlab/cones.hpp>
#include <shrinkerlab/errors.hpp>
#include <shrinkerlab/functionals.hpp>

#include <cmath>

using namespace shrinkerlab;
using namespace shrinkerlab::cones;

TEST_CASE("rescaling analytic surfaces") {
  const auto s = rescale(geom::make_sphere(2, 2.0), 2.0);
  CHECK(functionals::eval_F(s, 1.0).value == doctest::Approx(std::exp(-0.25)).epsilon(1e-10));
  const auto e = rescale(geom::make_plane(2, 1, 1.0), 4.0);
  REQUIRE(e.exterior_radius());
  CHECK(*e.exterior_radius() == doctest::Approx(0.25));
}

TEST_CASE("plane profiles are constant for every bundled function") {
  const auto plane = geom::make_plane(2, 1);
  for (const auto& phi : functionals::bundled_test_functions(3)) {
    const auto p = radial_mass_profile(plane, phi, {0.5, 1.0, 4.0, 16.0});
    CHECK(p.spread < 1e-10);
  }
  const auto one = functionals::HomogeneousTestFunction::constant();
  CHECK(radial_mass_profile(plane, one, {3.0}).points[0].value == doctest::Approx(M_PI));
}

TEST_CASE("the sphere profile is not constant") {
  const auto one = functionals::HomogeneousTestFunction::constant();
  const auto p = radial_mass_profile(geom::make_sphere(2, 2.0), one, {1.0, 3.0, 9.0});
  CHECK(p.points[0].skipped);
  CHECK(p.points[2].value < p.points[1].value);
}

TEST_CASE("cylinder sections shrink to the axis") {
  const auto cyl = geom::make_cylinder(2, 1, std::sqrt(2.0));
  const auto far = cone_deviation(cyl, 8.0, 16.0, 2.0, 64, 3);
  const auto near = cone_deviation(cyl, 1.0, 2.0, 2.0, 64, 3);
  CHECK(far.deviation < near.deviation);
  CHECK(cone_deviation(geom::make_plane(2, 1), 1.0, 16.0, 1.0, 64, 3).deviation < 1e-12);
  CHECK_THROWS_AS(cone_deviation(cyl, 1.0, 2.0, 1.0, 16, 3), DomainError);
  // seeded: identical draws
  const auto a = cross_section_parameters(cyl, 8, 42);
  const auto b = cross_section_parameters(cyl, 8, 42);
  for (std::size_t i = 0; i < a.size(); ++i) CHECK((a[i] - b[i]).norm() == 0.0);
}

TEST_CASE("Xi limit identity") {
  const auto phi = functionals::test_function_by_id("xi1^2", 3);
  const auto rep = xi_limit_consistency(geom::make_sphere(2, 2.0), phi, {0.5, 1.0, 2.0});
  CHECK(rep.identity_error < 1e-10);
  const auto plane = xi_limit_consistency(geom::make_plane(2, 1), phi, {0.25, 1.0, 4.0, 16.0});
  CHECK(plane.spread < 1e-10);
}
