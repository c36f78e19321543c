#include "shrinkerlab/numerics.hpp"

#include "shrinkerlab/errors.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <numbers>

namespace shrinkerlab {

Integral integrate_interval(const std::function<double(double)>& f, double a, double b,
                            double rel_tol, unsigned max_depth) {
  if (!(b > a)) return {};
  double error = 0.0;
  double l1 = 0.0;
  const double value = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
      f, a, b, max_depth, rel_tol, &error, &l1);
  return {value, error};
}

Integral integrate_unit_sphere(int j, const std::function<double(const Vec&)>& f,
                               double rel_tol) {
  if (j < 0) throw DomainError("sphere dimension must be >= 0");
  if (j == 0) {
    Vec u(1);
    u[0] = 1.0;
    const double plus = f(u);
    u[0] = -1.0;
    return {plus + f(u), 0.0};
  }
  if (j == 1) {
    Vec u(2);
    return integrate_interval(
        [&](double theta) {
          u[0] = std::cos(theta);
          u[1] = std::sin(theta);
          return f(u);
        },
        0.0, 2.0 * std::numbers::pi, rel_tol);
  }
  double inner_error = 0.0;
  Integral outer = integrate_interval(
      [&](double psi) {
        const double c = std::cos(psi);
        const double s = std::sin(psi);
        const Integral inner = integrate_unit_sphere(
            j - 1,
            [&](const Vec& eta) {
              Vec u(j + 1);
              u[0] = c;
              u.tail(j) = s * eta;
              return f(u);
            },
            rel_tol);
        const double jac = std::pow(s, j - 1);
        inner_error = std::max(inner_error, jac * inner.error);
        return jac * inner.value;
      },
      0.0, std::numbers::pi, rel_tol);
  outer.error += std::numbers::pi * inner_error;
  return outer;
}

double unit_sphere_area(int j) {
  const double d = j + 1;
  return 2.0 * std::pow(std::numbers::pi, d / 2.0) / std::tgamma(d / 2.0);
}

double unit_ball_volume(int d) {
  return std::pow(std::numbers::pi, d / 2.0) / std::tgamma(d / 2.0 + 1.0);
}

std::vector<double> geometric_grid(double lo, double hi, std::size_t count) {
  if (!(lo > 0.0) || !(hi >= lo)) throw DomainError("geometric grid needs 0 < lo <= hi");
  if (count == 0) return {};
  if (count == 1) return {lo};
  std::vector<double> out(count);
  const double step = std::log(hi / lo) / static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i) out[i] = lo * std::exp(step * static_cast<double>(i));
  out.back() = hi;
  return out;
}

double observed_order(double e_coarse, double e_fine, double ratio) {
  return std::log(e_coarse / e_fine) / std::log(ratio);
}

LagrangeWeights lagrange_weights(double xi, int n) {
  LagrangeWeights lw;
  lw.w0.assign(n, 0.0);
  lw.w1.assign(n, 0.0);
  lw.w2.assign(n, 0.0);
  for (int i = 0; i < n; ++i) {
    double denom = 1.0;
    for (int k = 0; k < n; ++k)
      if (k != i) denom *= static_cast<double>(i - k);
    // Products over k != i of (xi - k): value, first and second derivative.
    double p0 = 1.0;
    double p1 = 0.0;
    double p2 = 0.0;
    for (int k = 0; k < n; ++k) {
      if (k == i) continue;
      const double f = xi - k;
      p2 = p2 * f + 2.0 * p1;
      p1 = p1 * f + p0;
      p0 = p0 * f;
    }
    lw.w0[i] = p0 / denom;
    lw.w1[i] = p1 / denom;
    lw.w2[i] = p2 / denom;
  }
  return lw;
}

double gaussian_normalisation(int n, double t) {
  return std::pow(4.0 * std::numbers::pi * t, -0.5 * n);
}

double default_truncation_radius(int n, double t, double tol) {
  return 2.0 * std::sqrt(t * (n + 2.0 * std::log(1.0 / tol)));
}

}  // namespace shrinkerlab
