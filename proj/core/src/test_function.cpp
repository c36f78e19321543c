#include "shrinkerlab/test_function.hpp"

#include "shrinkerlab/errors.hpp"

#include <fmt/format.h>

#include <random>
#include <regex>

namespace shrinkerlab::functionals {

HomogeneousTestFunction::HomogeneousTestFunction(std::string id, Value value, Gradient gradient,
                                                 double norm0, double norm1)
    : id_(std::move(id)), value_(std::move(value)), gradient_(std::move(gradient)), norm0_(norm0), norm1_(norm1) {}

Vec HomogeneousTestFunction::ambient_gradient(const Vec& X) const {
  const double r = X.norm();
  const Vec xi = X / r;
  const Vec g = gradient_(xi);
  return (g - xi * xi.dot(g)) / r;
}

HomogeneousTestFunction HomogeneousTestFunction::constant() {
  return {"one", [](const Vec&) { return 1.0; }, [](const Vec& xi) -> Vec { return Vec::Zero(xi.size()); }, 1.0,
          0.0};
}

HomogeneousTestFunction HomogeneousTestFunction::coordinate(int j) {
  return {fmt::format("xi{}", j + 1), [j](const Vec& xi) { return xi[j]; },
          [j](const Vec& xi) -> Vec {
            Vec g = Vec::Zero(xi.size());
            g[j] = 1.0;
            return g;
          },
          1.0, 1.0};
}

HomogeneousTestFunction HomogeneousTestFunction::coordinate_squared(int j) {
  return {fmt::format("xi{}^2", j + 1), [j](const Vec& xi) { return xi[j] * xi[j]; },
          [j](const Vec& xi) -> Vec {
            Vec g = Vec::Zero(xi.size());
            g[j] = 2.0 * xi[j];
            return g;
          },
          1.0, 2.0};
}

HomogeneousTestFunction HomogeneousTestFunction::product(int i, int j) {
  if (i == j) throw DomainError("product test function needs distinct indices");
  return {fmt::format("xi{}*xi{}", i + 1, j + 1), [i, j](const Vec& xi) { return xi[i] * xi[j]; },
          [i, j](const Vec& xi) -> Vec {
            Vec g = Vec::Zero(xi.size());
            g[i] = xi[j];
            g[j] = xi[i];
            return g;
          },
          0.5, 1.0};
}

std::vector<HomogeneousTestFunction> bundled_test_functions(int ambient_dim) {
  std::vector<HomogeneousTestFunction> out{HomogeneousTestFunction::constant()};
  for (int j = 0; j < ambient_dim; ++j) out.push_back(HomogeneousTestFunction::coordinate(j));
  for (int j = 0; j < ambient_dim; ++j) out.push_back(HomogeneousTestFunction::coordinate_squared(j));
  for (int i = 0; i < ambient_dim; ++i)
    for (int j = i + 1; j < ambient_dim; ++j) out.push_back(HomogeneousTestFunction::product(i, j));
  return out;
}

HomogeneousTestFunction test_function_by_id(const std::string& id, int ambient_dim) {
  static const std::regex coord(R"(xi(\d+))");
  static const std::regex square(R"(xi(\d+)\^2)");
  static const std::regex prod(R"(xi(\d+)\*xi(\d+))");
  std::smatch m;
  auto index = [&](const std::string& s) {
    const int j = std::stoi(s) - 1;
    if (j < 0 || j >= ambient_dim)
      throw DomainError(fmt::format("test function '{}' indexes outside R^{}", id, ambient_dim));
    return j;
  };
  if (id == "one") return HomogeneousTestFunction::constant();
  if (std::regex_match(id, m, coord)) return HomogeneousTestFunction::coordinate(index(m[1]));
  if (std::regex_match(id, m, square)) return HomogeneousTestFunction::coordinate_squared(index(m[1]));
  if (std::regex_match(id, m, prod)) return HomogeneousTestFunction::product(index(m[1]), index(m[2]));
  throw DomainError(fmt::format("unknown test function '{}'", id));
}

GradientBoundCheck check_gradient_bound(const HomogeneousTestFunction& phi, int ambient_dim,
                                        std::size_t samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coord(-1.0, 1.0);
  std::uniform_real_distribution<double> logr(-3.0, 3.0);
  GradientBoundCheck out;
  for (std::size_t s = 0; s < samples; ++s) {
    Vec X(ambient_dim);
    for (int i = 0; i < ambient_dim; ++i) X[i] = coord(rng);
    if (X.norm() < 1e-6) continue;
    X *= std::pow(10.0, logr(rng)) / X.norm();
    const double lhs = phi.ambient_gradient(X).norm() * X.norm();
    const double ratio = phi.norm1() > 0.0 ? lhs / phi.norm1() : (lhs > 0.0 ? INFINITY : 0.0);
    out.worst_ratio = std::max(out.worst_ratio, ratio);
    ++out.samples;
  }
  out.holds = out.worst_ratio <= 1.0 + 1e-12;
  return out;
}

}  // namespace shrinkerlab::functionals
