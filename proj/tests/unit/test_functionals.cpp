#include <doctest.h>

#include <shrinkerlab/errors.hpp>
#include <shrinkerlab/functionals.hpp>

#include <cmath>

using namespace shrinkerlab;
using namespace shrinkerlab::functionals;

namespace {
// closed forms for n = 2 in R^3
double sphere_F(double R, double t) { return R * R / t * std::exp(-R * R / (4 * t)); }
double sphere_Fp(double R, double t) {
  return std::exp(-R * R / (4 * t)) * (-R * R / (t * t) + std::pow(R, 4) / (4 * t * t * t));
}
double cylinder_F(double R, double t) { return R * std::sqrt(M_PI / t) * std::exp(-R * R / (4 * t)); }
}  // namespace

TEST_CASE("Gaussian area of the catalog") {
  const auto plane = geom::make_plane(2, 1);
  const auto sphere = geom::make_sphere(2, 2.0);
  const auto cyl = geom::make_cylinder(2, 1, std::sqrt(2.0));
  for (double t : {0.5, 1.0, 2.0, 4.0}) {
    CHECK(std::abs(eval_F(plane, t).value - 1.0) < 1e-10);
    CHECK(std::abs(eval_F(sphere, t).value - sphere_F(2.0, t)) < 1e-10);
    CHECK(std::abs(eval_F(cyl, t).value - cylinder_F(std::sqrt(2.0), t)) < 1e-10);
  }
  CHECK(std::abs(eval_F(geom::make_plane(3, 2), 1.7).value - 1.0) < 1e-10);
}

TEST_CASE("exterior plane") {
  const auto ext = geom::make_plane(2, 1, 1.0);
  for (double t : {1.0, 4.0}) CHECK(std::abs(eval_F(ext, t).value - std::exp(-1.0 / (4 * t))) < 1e-10);
  // conormal points into B_1, so the flux is d/dt e^{-1/4t}
  for (double t : {0.5, 2.0}) {
    const double expect = std::exp(-1.0 / (4 * t)) / (4 * t * t);
    CHECK(std::abs(boundary_flux(ext, t).value - expect) < 1e-10);
    CHECK(std::abs(eval_F_prime(ext, t).value - expect) < 1e-10);
  }
}

TEST_CASE("F' closed form and the sign change at t = 1") {
  const auto sphere = geom::make_sphere(2, 2.0);
  CHECK(std::abs(eval_F_prime(sphere, 1.0).value) < 1e-10);
  for (double t : {0.5, 0.9, 1.1, 2.0})
    CHECK(std::abs(eval_F_prime(sphere, t).value - sphere_Fp(2.0, t)) < 1e-9);
  CHECK(eval_F_prime(sphere, 0.9).value > 0.0);
  CHECK(eval_F_prime(sphere, 1.1).value < 0.0);
  CHECK_THROWS_AS(eval_F_prime(geom::make_sphere(2, 1.0), 1.0), PreconditionError);
}

TEST_CASE("G on the sphere") {
  const auto sphere = geom::make_sphere(2, 2.0);
  for (double t : {0.5, 2.0}) {
    const double expect = -(1.0 / (4 * t)) * (1.0 - 1.0 / t) * 4.0 * sphere_F(2.0, t);
    CHECK(std::abs(eval_G(sphere, t).value - expect) < 1e-10);
  }
  CHECK(std::abs(eval_G(geom::make_plane(2, 1), 2.0).value) < 1e-14);
}

TEST_CASE("Xi with homogeneous test functions") {
  const auto plane = geom::make_plane(2, 1);
  const auto one = HomogeneousTestFunction::constant();
  const auto sq = test_function_by_id("xi1^2", 3);
  const auto z = test_function_by_id("xi3", 3);
  for (double t : {0.25, 1.0, 16.0}) {
    CHECK(std::abs(eval_Xi(plane, one, t).value - 1.0) < 1e-10);
    CHECK(std::abs(eval_Xi(plane, sq, t).value - 0.5) < 1e-10);
    CHECK(std::abs(eval_Xi(plane, z, t).value) < 1e-12);
  }
  const auto sphere = geom::make_sphere(2, 2.0);
  CHECK(eval_Xi(sphere, one, 1.3).value == doctest::Approx(eval_F(sphere, 1.3).value).epsilon(1e-12));
}

TEST_CASE("test function bookkeeping") {
  CHECK(bundled_test_functions(3).size() == 10);
  CHECK_THROWS_AS(test_function_by_id("xi4", 3), DomainError);
  CHECK_THROWS_AS(test_function_by_id("nope", 3), DomainError);
  for (const auto& phi : bundled_test_functions(3))
    CHECK(check_gradient_bound(phi, 3, 200, 11).holds);
}

TEST_CASE("truncation is checked") {
  geom::QuadratureSpec q;
  q.rho_max = 1.0;
  CHECK_THROWS_AS(eval_F(geom::make_plane(2, 1), 1.0, q), TruncationError);
  CHECK_THROWS_AS(eval_F(geom::make_plane(2, 1), -1.0), DomainError);
}
