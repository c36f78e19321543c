#include <doctest.h>

#include <shrinkerlab/errors.hpp>
#include <shrinkerlab/geom/builders.hpp>
#include <shrinkerlab/geom/geometry.hpp>
#include <shrinkerlab/geom/integrate.hpp>

#include <cmath>

using namespace shrinkerlab;
using namespace shrinkerlab::geom;

TEST_CASE("catalog shrinkers and dimensions") {
  const auto plane = make_plane(2, 1);
  CHECK(plane.dim() == 2);
  CHECK(plane.ambient_dim() == 3);
  CHECK(plane.is_catalog_shrinker());
  CHECK(make_sphere(2, 2.0).is_catalog_shrinker());
  CHECK_FALSE(make_sphere(2, 1.0).is_catalog_shrinker());
  CHECK(make_cylinder(3, 2, 2.0).is_catalog_shrinker());
  CHECK(make_plane(2, 2).codim() == 2);
  CHECK_THROWS_AS(plane.discrete(), DomainError);
}

TEST_CASE("analytic samples") {
  const auto sphere = make_sphere(2, 2.0);
  Vec X(3);
  X << 0.0, 0.0, 2.0;
  const auto g = sample_at(sphere, X);
  CHECK(g.B_norm * g.B_norm == doctest::Approx(0.5));
  CHECK(g.XT.norm() < 1e-14);
  // H = -X/2 on the shrinking sphere
  CHECK((g.H + 0.5 * g.XN).norm() < 1e-14);

  const auto cyl = make_cylinder(2, 1, std::sqrt(2.0));
  Vec Y(3);
  Y << std::sqrt(2.0), 0.0, 3.0;
  const auto c = sample_at(cyl, Y);
  CHECK(c.B_norm * c.B_norm == doctest::Approx(0.5));
  CHECK(c.XT.norm() == doctest::Approx(3.0));
}

TEST_CASE("shrinker residual of the catalog and of a non-shrinker") {
  CHECK(shrinker_residual(make_plane(2, 1)).sup < 1e-14);
  CHECK(shrinker_residual(make_sphere(2, 2.0)).sup < 1e-14);
  CHECK(shrinker_residual(make_cylinder(2, 1, std::sqrt(2.0))).sup < 1e-14);
  // sphere of radius 1: H = -2X, X^N/2 = X/2, residual 3/2
  CHECK(shrinker_residual(make_sphere(2, 1.0)).sup == doctest::Approx(1.5));
}

TEST_CASE("ball volume and area integrals") {
  const auto plane = make_plane(2, 1);
  CHECK(ball_volume(plane, 3.0) == doctest::Approx(9.0 * M_PI).epsilon(1e-9));
  const auto ext = make_plane(2, 1, 1.0);
  CHECK(ball_volume(ext, 3.0) == doctest::Approx(8.0 * M_PI).epsilon(1e-9));
  CHECK(boundary_measure(ext) == doctest::Approx(2.0 * M_PI));
  CHECK(min_radius(ext) == doctest::Approx(1.0));
  const auto sphere = make_sphere(2, 2.0);
  const auto area = integrate(sphere, [](const GeometrySample&) { return 1.0; }, Region{}, 1e-12);
  CHECK(area.value == doctest::Approx(16.0 * M_PI).epsilon(1e-11));
}

TEST_CASE("mesh fits approach the sphere under refinement") {
  auto s = make_icosphere(2.0, 2);
  double prev = INFINITY;
  for (int L = 0; L < 2; ++L) {
    double dev = 0.0;
    for (std::size_t e = 0; e < s.element_count(); ++e) {
      const auto g = sample_element(s, e);
      dev = std::max(dev, std::abs(g.B_norm * g.B_norm - 0.5));
    }
    CHECK(dev < prev / 8.0);
    prev = dev;
    s = refine(s).surface;
  }
}

TEST_CASE("polyline circle") {
  const auto c = make_circle_polyline(std::sqrt(2.0), 512);
  CHECK(c.dim() == 1);
  const auto g = sample_element(c, 0);
  CHECK(g.B_norm == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-4));
}

TEST_CASE("drift identity on analytic shrinkers") {
  CHECK(drift_identity_residual(make_sphere(2, 2.0), 1e-8).sup < 1e-12);
  CHECK_THROWS_AS(drift_identity_residual(make_sphere(2, 1.0), 1e-8), PreconditionError);
}
