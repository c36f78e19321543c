#include <doctest.h>

#include <shrinkerlab/numerics.hpp>

#include <cmath>

using namespace shrinkerlab;

TEST_CASE("compensated sum keeps small terms") {
  CompensatedSum s;
  s.add(1.0);
  for (int i = 0; i < 1000; ++i) s.add(1e-16);
  s.add(-1.0);
  CHECK(s.value() == doctest::Approx(1e-13).epsilon(1e-6));
}

TEST_CASE("Gauss-Kronrod on smooth and endpoint-singular integrands") {
  const auto a = integrate_interval([](double x) { return std::exp(-x * x); }, 0.0, 8.0, 1e-13);
  CHECK(std::abs(a.value - 0.5 * std::sqrt(M_PI)) < 1e-13);
  const auto b = integrate_interval([](double x) { return std::sqrt(x); }, 0.0, 1.0, 1e-12);
  CHECK(std::abs(b.value - 2.0 / 3.0) < 1e-10);
  CHECK(integrate_interval([](double) { return 1.0; }, 2.0, 2.0, 1e-10).value == 0.0);
}

TEST_CASE("sphere areas and ball volumes") {
  CHECK(unit_sphere_area(0) == doctest::Approx(2.0));
  CHECK(unit_sphere_area(1) == doctest::Approx(2.0 * M_PI));
  CHECK(unit_sphere_area(2) == doctest::Approx(4.0 * M_PI));
  CHECK(unit_ball_volume(3) == doctest::Approx(4.0 * M_PI / 3.0));
  // x_0^2 averages to 1/(j+1)
  for (int j = 1; j <= 3; ++j) {
    const auto I = integrate_unit_sphere(j, [](const Vec& x) { return x[0] * x[0]; }, 1e-12);
    CHECK(I.value == doctest::Approx(unit_sphere_area(j) / (j + 1)).epsilon(1e-11));
  }
}

TEST_CASE("geometric grid and observed order") {
  const auto g = geometric_grid(1e-2, 1e2, 5);
  REQUIRE(g.size() == 5);
  CHECK(g.front() == 1e-2);
  CHECK(g.back() == 1e2);
  CHECK(g[2] == doctest::Approx(1.0));
  CHECK(observed_order(4e-4, 1e-4) == doctest::Approx(2.0));
}

TEST_CASE("Lagrange weights reproduce quadratics") {
  const auto w = lagrange_weights(1.3, 4);
  double v = 0, d1 = 0, d2 = 0;
  for (int k = 0; k < 4; ++k) {
    const double f = k * k;
    v += w.w0[k] * f;
    d1 += w.w1[k] * f;
    d2 += w.w2[k] * f;
  }
  CHECK(v == doctest::Approx(1.69));
  CHECK(d1 == doctest::Approx(2.6));
  CHECK(d2 == doctest::Approx(2.0));
}

TEST_CASE("Gaussian normalisation") {
  CHECK(gaussian_normalisation(2, 1.0) == doctest::Approx(1.0 / (4.0 * M_PI)));
  CHECK(default_truncation_radius(2, 1.0, 1e-10) > 8.0);
}
