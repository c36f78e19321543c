#include <doctest.h>

#include <shrinkerlab/errors.hpp>
#include <shrinkerlab/regularity.hpp>

#include <cmath>

using namespace shrinkerlab;
using namespace shrinkerlab::regularity;

namespace {
// area of S^1(R) x R inside B_{2r} \ B_r, r >= R
double cylinder_annulus_area(double R, double r) {
  return 2 * M_PI * R * 2 * (std::sqrt(4 * r * r - R * R) - std::sqrt(r * r - R * R));
}
Vec point(double x, double y, double z) {
  Vec v(3);
  v << x, y, z;
  return v;
}
}  // namespace

TEST_CASE("annulus profile of the cylinder") {
  const double R = std::sqrt(2.0);
  const auto cyl = geom::make_cylinder(2, 1, R);
  const auto prof = annulus_profile(cyl, 2.0, {2.0, 4.0, 8.0});
  for (std::size_t i = 0; i < prof.radii.size(); ++i)
    CHECK(prof.values[i] == doctest::Approx(0.5 * cylinder_annulus_area(R, prof.radii[i])).epsilon(1e-8));
  CHECK_FALSE(prof.decays());
  const auto plane = annulus_profile(geom::make_plane(2, 1), 2.0, {1.0, 2.0});
  CHECK(plane.values[0] == 0.0);
  CHECK_THROWS_AS(annulus_profile(cyl, 5.0, {2.0}), DomainError);
}

TEST_CASE("I vanishes on the plane") {
  const auto I = eval_I(geom::make_plane(2, 1), point(1, 0, 0), -0.25, 2.0);
  CHECK(I.value == 0.0);
  CHECK(I.specialized_range == false);
  CHECK_THROWS_AS(eval_I(geom::make_sphere(2, 1.0), point(1, 0, 0), -0.5, 2.0), PreconditionError);
  CHECK_THROWS_AS(eval_I(geom::make_plane(2, 1), point(1, 0, 0), 0.5, 2.0), DomainError);
}

TEST_CASE("I on the cylinder sits below the chain bound") {
  const auto cyl = geom::make_cylinder(2, 1, std::sqrt(2.0));
  const Vec X0 = point(std::sqrt(2.0), 0, std::sqrt(62.0));
  const auto I = eval_I(cyl, X0, -0.01, 2.0);
  const auto c = chain_bound(cyl, X0, -0.01, 2.0);
  CHECK(I.value > 0.0);
  CHECK(c.containment);
  CHECK(I.value <= c.bound);
}

TEST_CASE("alpha supremum") {
  for (double a : {0.25, 0.5, 0.75, 1.0}) {
    const auto s = alpha_supremum(a);
    CHECK(std::abs(s.supremum - 1.0) < 1e-4);
    CHECK(s.monotone);
    CHECK(s.scanned_max <= 1.0 + 1e-12);
  }
  CHECK_THROWS_AS(alpha_supremum(1.5), DomainError);
}

TEST_CASE("curvature estimate slices") {
  const auto cyl = geom::make_cylinder(2, 1, std::sqrt(2.0));
  const auto prof = annulus_profile(cyl, 2.0, {1.5, 3.0, 6.0, 12.0});
  const auto e = curvature_estimate_ratio(cyl, 1.5, 5.0, prof);
  CHECK(e.lhs == doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK_FALSE(e.hypothesis_met);
  const auto plane = geom::make_plane(2, 1);
  const auto pp = annulus_profile(plane, 2.0, {1.0, 2.0});
  CHECK(curvature_estimate_ratio(plane, 1.0, 5.0, pp).lhs == 0.0);
  CHECK_THROWS_AS(curvature_estimate_ratio(cyl, 1.5, 3.0, prof), DomainError);
}

TEST_CASE("volume growth of ends") {
  const auto ext = geom::make_plane(2, 1, 1.0);
  const auto v = volume_growth(ext, 0.0, {2.0, 10.0, 50.0});
  for (std::size_t i = 0; i < v.radii.size(); ++i) {
    const double r = v.radii[i];
    CHECK(v.V[i] == doctest::Approx(M_PI * (1.0 - 1.0 / (r * r))).epsilon(1e-8));
  }
  CHECK(v.hypothesis_met);
  const auto c = volume_growth(geom::make_cylinder(2, 1, std::sqrt(2.0), 2.0), 0.0, geometric_grid(3.0, 30.0, 7));
  CHECK_FALSE(c.hypothesis_met);
}
