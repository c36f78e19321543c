#include <benchmark/benchmark.h>

#include <shrinkerlab/functionals.hpp>
#include <shrinkerlab/geom/builders.hpp>
#include <shrinkerlab/geom/geometry.hpp>
#include <shrinkerlab/graphs.hpp>
#include <shrinkerlab/moment.hpp>
#include <shrinkerlab/monotonicity.hpp>
#include <shrinkerlab/regularity.hpp>

#include <cmath>

using namespace shrinkerlab;

static void BM_EvalF_Sphere(benchmark::State& state) {
  const auto s = geom::make_sphere(2, 2.0);
  for (auto _ : state) benchmark::DoNotOptimize(functionals::eval_F(s, 1.3).value);
}
BENCHMARK(BM_EvalF_Sphere);

static void BM_EvalF_Cylinder(benchmark::State& state) {
  const auto s = geom::make_cylinder(3, 1, std::sqrt(2.0));
  for (auto _ : state) benchmark::DoNotOptimize(functionals::eval_F(s, 1.3).value);
}
BENCHMARK(BM_EvalF_Cylinder)->Unit(benchmark::kMillisecond);

static void BM_Ledger_ExteriorPlane(benchmark::State& state) {
  const auto s = geom::make_plane(2, 1, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(monotonicity::verify_monotonicity(s, 1.0, 4.0).defect);
}
BENCHMARK(BM_Ledger_ExteriorPlane)->Unit(benchmark::kMillisecond);

static void BM_Icosphere_Drift(benchmark::State& state) {
  const int level = static_cast<int>(state.range(0));
  for (auto _ : state) {
    const auto s = geom::make_icosphere(2.0, level);
    benchmark::DoNotOptimize(geom::drift_identity_residual(s, 1.0).sup);
  }
  state.SetLabel(std::to_string(geom::make_icosphere(2.0, level).element_count()) + " vertices");
}
BENCHMARK(BM_Icosphere_Drift)->DenseRange(2, 4)->Unit(benchmark::kMillisecond);

static void BM_GaussianTransform(benchmark::State& state) {
  const auto V = moment::power_law(2, 1.0, 1e-6, 300.0, 1.0 + 1e-4);
  for (auto _ : state) benchmark::DoNotOptimize(moment::gaussian_transform(V, 1.0).value);
  state.SetLabel(std::to_string(V.radii().size()) + " breakpoints");
}
BENCHMARK(BM_GaussianTransform)->Unit(benchmark::kMillisecond);

static void BM_Laplace(benchmark::State& state) {
  const double p = std::pow(10.0, static_cast<double>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(moment::laplace_asymptotic_I(p).value);
}
BENCHMARK(BM_Laplace)->DenseRange(2, 6, 2);

static void BM_EvalI_Cylinder(benchmark::State& state) {
  const auto s = geom::make_cylinder(2, 1, std::sqrt(2.0));
  Vec X0(3);
  X0 << std::sqrt(2.0), 0.0, std::sqrt(62.0);
  for (auto _ : state) benchmark::DoNotOptimize(regularity::eval_I(s, X0, -0.01, 2.0).value);
}
BENCHMARK(BM_EvalI_Cylinder)->Unit(benchmark::kMillisecond)->Iterations(3);

static void BM_GraphNewton(benchmark::State& state) {
  const double h = 1.0 / static_cast<double>(state.range(0));
  const auto grid = geom::GraphGrid::over_annulus(2.0, 6.0, h);
  const double eps = 0.05 / 6.5;
  const auto data = [eps](const geom::Point2& x) {
    const double r = x.norm();
    return Vec::Constant(1, 0.06 * x[0] - 0.08 * x[1] + eps * (r + 3.0 / r) * (x[0] * x[0] - x[1] * x[1]) / (r * r));
  };
  for (auto _ : state) benchmark::DoNotOptimize(graphs::solve_graph_shrinker(grid, 1, data, data).iterations);
}
BENCHMARK(BM_GraphNewton)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
