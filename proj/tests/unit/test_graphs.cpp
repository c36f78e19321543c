#include <doctest.h>

#include <shrinkerlab/errors.hpp>
#include <shrinkerlab/graphs.hpp>

#include <cmath>

using namespace shrinkerlab;
using namespace shrinkerlab::graphs;
using geom::GraphFunction;
using geom::GraphGrid;
using geom::Point2;

namespace {
GraphFunction linear(double a, double b, double inner = 2.0, double outer = 8.0, double h = 0.25) {
  return GraphFunction::sample(GraphGrid::over_annulus(inner, outer, h), 1,
                               [=](const Point2& x) { return Vec::Constant(1, a * x[0] + b * x[1]); });
}
GraphFunction::Field perturbed(double inner, double outer) {
  const double eps = 0.05 / (outer + 3.0 / outer);
  return [=](const Point2& x) {
    const double r = x.norm();
    const double c = (x[0] * x[0] - x[1] * x[1]) / (r * r);
    return Vec::Constant(1, 0.06 * x[0] - 0.08 * x[1] + eps * (r + 3.0 / r) * c);
  };
}
}  // namespace

TEST_CASE("annulus grid") {
  const auto g = GraphGrid::over_annulus(2.0, 8.0, 0.25);
  CHECK(g.h == 0.25);
  CHECK(g.contains(Point2(3.0, 0.0)));
  CHECK_FALSE(g.contains(Point2(1.0, 0.0)));
  CHECK_FALSE(g.contains(Point2(9.0, 0.0)));
}

TEST_CASE("linear maps solve the graph system exactly") {
  const auto u = linear(0.12, -0.16);
  const auto res = graph_residual(u);
  CHECK(res.sup < 1e-12);
  const auto d = decay_constants(u);
  CHECK(d.c_M == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(d.c[2] < 1e-12);
  const auto fit = linear_fit(u);
  CHECK(fit.A(0, 0) == doctest::Approx(0.12));
  CHECK(fit.A(0, 1) == doctest::Approx(-0.16));
  CHECK(fit.max_deviation < 1e-12);
}

TEST_CASE("quadratic heights are not shrinkers") {
  const auto u = GraphFunction::sample(GraphGrid::over_annulus(2.0, 8.0, 0.25), 1,
                                       [](const Point2& x) { return Vec::Constant(1, 0.01 * x[0] * x[0]); });
  CHECK(graph_residual(u).interior_sup > 1e-3);
  CHECK_THROWS_AS(rescaled_heat_check(u), PreconditionError);
}

TEST_CASE("Newton with linear data stays linear") {
  const auto grid = GraphGrid::over_annulus(2.0, 6.0, 0.25);
  const auto f = [](const Point2& x) { return Vec::Constant(1, 0.1 * x[0] + 0.05 * x[1]); };
  const auto sol = solve_graph_shrinker(grid, 1, f, f);
  CHECK(sol.iterations == 0);
  CHECK(linear_fit(sol.u).max_deviation < 1e-12);
}

TEST_CASE("Newton on perturbed data") {
  const auto grid = GraphGrid::over_annulus(2.0, 6.0, 0.25);
  const auto f = perturbed(2.0, 6.0);
  const auto sol = solve_graph_shrinker(grid, 1, f, [](const Point2& x) {
    return Vec::Constant(1, 0.06 * x[0] - 0.08 * x[1]);
  });
  CHECK(sol.history.back() < 1e-10);
  CHECK(graph_residual(sol.u).interior_sup < 1e-10);
  const auto heat = rescaled_heat_check(sol.u);
  CHECK(heat.violations == 0);
  CHECK(heat.neumann_regime);
  CHECK_FALSE(heat.nodes.empty());

  SolveOptions opt;
  opt.max_iterations = 1;
  opt.tol = 1e-15;
  CHECK_THROWS_AS(solve_graph_shrinker(grid, 1, f, f, opt), ConvergenceError);
}

TEST_CASE("heat check on a linear graph") {
  const auto heat = rescaled_heat_check(linear(0.12, -0.16));
  CHECK(heat.violations == 0);
  CHECK(heat.max_gap < 1e-8);
}
