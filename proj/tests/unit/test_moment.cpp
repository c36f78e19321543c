#include <doctest.h>

#include <shrinkerlab/errors.hpp>
#include <shrinkerlab/moment.hpp>

#include <cmath>

using namespace shrinkerlab;
using namespace shrinkerlab::moment;

TEST_CASE("table validation") {
  CHECK_THROWS_AS(MomentFunction(1, 2.0, {1.0, 2.0}, {1.0, 0.5}), DomainError);
  CHECK_THROWS_AS(MomentFunction(1, 1.0, {1.0, 2.0}, {1.0, 2.5}), DomainError);
  CHECK_THROWS_AS(MomentFunction(1, 2.0, {1.0, 1.0, 1.0}, {1.0, 1.2, 1.4}), DomainError);
  CHECK_THROWS_AS(MomentFunction(1, 2.0, {}, {}), DomainError);
  const MomentFunction V(1, 2.0, {0.1, 0.1, 1.0}, {0.1, 0.2, 1.1});
  CHECK(V.has_jumps());
  CHECK(V(0.05) == doctest::Approx(0.05));
  CHECK(V(0.1) == doctest::Approx(0.2));
  CHECK(V(0.55) == doctest::Approx(0.65));
}

TEST_CASE("transform of tables with closed forms") {
  const double t = 0.005;
  const MomentFunction ramp(1, 1.0, {1.0}, {1.0});
  CHECK(gaussian_transform(ramp, t).value == doctest::Approx(0.5 * std::erf(1.0 / (2.0 * std::sqrt(t)))));
  const MomentFunction jump(1, 2.0, {0.1, 0.1, 1.0}, {0.1, 0.2, 1.1});
  const double expect = 0.5 * std::erf(1.0 / (2.0 * std::sqrt(t))) + 0.1 * std::exp(-0.5) / std::sqrt(4 * M_PI * t);
  CHECK(gaussian_transform(jump, t).value == doctest::Approx(expect).epsilon(1e-12));
  CHECK_THROWS_AS(gaussian_transform(ramp, 1.0), TruncationError);
}

TEST_CASE("power laws have constant transforms") {
  const auto V1 = power_law(1, 1.0, 1e-6, 300.0, 1.0 + 1e-4);
  const auto V2 = power_law(2, 1.0, 1e-6, 300.0, 1.0 + 1e-4);
  for (double t : {1e-2, 1.0, 1e2}) {
    CHECK(std::abs(gaussian_transform(V1, t).value - 0.5) < 1e-9);
    CHECK(std::abs(gaussian_transform(V2, t).value - 1.0 / M_PI) < 1e-9);
  }
  const auto c = constancy_test(V2, default_time_grid());
  CHECK(c.homogeneous);
  CHECK(c.kappa1 == doctest::Approx(1.0).epsilon(1e-9));
  CHECK_THROWS_AS(constancy_test(V2, {1.0, 2.0, 5.0}), DomainError);
}

TEST_CASE("bumps are not homogeneous and separate with the sign of the bump") {
  const auto up = bump(2, 2.0, 0.1, 0.5, 1, 1e-4, 200.0, 1.002);
  const auto down = bump(2, 2.0, 0.1, 0.5, -1, 1e-4, 200.0, 1.002);
  CHECK_FALSE(constancy_test(up, default_time_grid()).homogeneous);
  CHECK_FALSE(constancy_test(down, default_time_grid()).homogeneous);
  const auto su = moment_separation(up, 1.0, {200}, focus_time(200, 2.0));
  const auto sd = moment_separation(down, 1.0, {200}, focus_time(200, 2.0));
  CHECK(su[0].relative > 0.0);
  CHECK(sd[0].relative < 0.0);
  const auto flat = moment_separation(power_law(2, 1.0, 1e-4, 200.0, 1.002), 1.0, {200}, focus_time(200, 2.0));
  CHECK(std::abs(flat[0].relative) < 1e-5);
}

TEST_CASE("combine") {
  const auto a = power_law(2, 1.0, 1e-3, 50.0, 1.01);
  const auto s = MomentFunction::combine(2.0, a, 3.0, a);
  CHECK(s(10.0) == doctest::Approx(500.0).epsilon(1e-3));
  CHECK(s.c3() == doctest::Approx(5.0));
}

TEST_CASE("Laplace asymptotic") {
  CHECK(focus_time(0, 2.0) == doctest::Approx(8.0));
  double prev = INFINITY;
  for (double p : {1e2, 1e4, 1e6}) {
    const auto L = laplace_asymptotic_I(p);
    const double rel = L.value / std::sqrt(M_PI) - 1.0;
    // I(p) = sqrt(pi) (1 - 1/(12p) + O(p^-2)) once the window |u| <= sqrt(p)/4 is wide
    if (p >= 1e4) CHECK(std::abs(rel + 1.0 / (12.0 * p)) < 10.0 / (p * p) + 1e-12);
    CHECK(L.lower <= L.value + 1e-15);
    CHECK(L.upper >= L.value - 1e-15);
    CHECK(std::abs(rel) < prev);
    prev = std::abs(rel);
  }
  CHECK_THROWS_AS(laplace_asymptotic_I(1.0), DomainError);
}
