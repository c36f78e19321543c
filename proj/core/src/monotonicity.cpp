#include "shrinkerlab/monotonicity.hpp"

#include "shrinkerlab/errors.hpp"
#include "shrinkerlab/geom/geometry.hpp"

#include <fmt/format.h>

#include <cmath>
#include <numbers>

namespace shrinkerlab::monotonicity {

MonotonicityLedger verify_monotonicity(const ShrinkerSurface& surface, double t1, double t2,
                                       const QuadratureSpec& quad) {
  if (!(t1 > 0.0) || !(t2 >= t1) || !std::isfinite(t2)) throw DomainError("need 0 < t1 <= t2 < infinity");
  const geom::ResidualNorms res = geom::shrinker_residual(surface, quad);
  if (!(res.sup <= quad.shrinker_tol))
    throw PreconditionError(fmt::format("monotonicity identity needs a shrinker (residual {:.6g})", res.sup),
                            res.sup);
  MonotonicityLedger L;
  L.t1 = t1;
  L.t2 = t2;
  L.t_grid = t2 > t1 ? geometric_grid(t1, t2, 9) : std::vector<double>{t1};
  for (double t : L.t_grid) L.F.push_back(functionals::eval_F(surface, t, quad).value);
  const Integral F1 = functionals::eval_F(surface, t1, quad);
  const Integral F2 = functionals::eval_F(surface, t2, quad);
  L.lhs = F2.value - F1.value;
  L.lhs_error = F1.error + F2.error;
  if (t2 > t1) {
    // Time integrals in u = log s.
    const double time_tol = std::max(quad.tol * 10.0, 1e-12);
    double inner_b = 0.0;
    double inner_n = 0.0;
    const Integral B = integrate_interval(
        [&](double u) {
          const double s = std::exp(u);
          const Integral I = functionals::boundary_flux(surface, s, quad);
          inner_b = std::max(inner_b, I.error * s);
          return I.value * s;
        },
        std::log(t1), std::log(t2), time_tol, quad.max_depth);
    const Integral N = integrate_interval(
        [&](double u) {
          const double s = std::exp(u);
          const Integral I = functionals::eval_G(surface, s, quad);
          inner_n = std::max(inner_n, I.error * s);
          return I.value * s;
        },
        std::log(t1), std::log(t2), time_tol, quad.max_depth);
    const double span = std::log(t2 / t1);
    L.boundary = B.value;
    L.boundary_error = B.error + span * inner_b;
    L.normal = N.value;
    L.normal_error = N.error + span * inner_n;
  }
  L.defect = L.lhs - (L.boundary + L.normal);
  const double scale = std::abs(F1.value) + std::abs(F2.value);
  L.budget = L.lhs_error + L.boundary_error + L.normal_error + 10.0 * quad.tol * scale;
  L.pass = std::abs(L.defect) <= L.budget;
  return L;
}

double xi_bound_c1(int n, double c0, double R) {
  if (n < 2) throw DomainError("the Xi derivative bound needs n >= 2");
  if (!(R >= 1.0)) throw DomainError("the Xi derivative bound needs R >= 1");
  double S1 = 0.0;
  for (int k = 0; k < 64; ++k) {
    const double term = std::exp(std::log(2.0) * (k * (n - 2.0) + n) - std::pow(4.0, k - 1.0));
    S1 += term;
    if (term < 1e-300) break;
  }
  // S2 jumps at t = R^2 4^j and the denominator grows in between, so the
  // supremum is attained at those points.
  double best = 0.0;
  double S2 = 0.0;
  for (int j = 0; j <= 60; ++j) {
    const int kmax = 1 + j;
    S2 += std::pow(2.0, -kmax * (n - 2.0) + n);
    const double log_ratio = j * std::log(4.0);  // log t - 2 log R
    const double value = c0 * (S1 + S2) / (std::pow(4.0 * std::numbers::pi, 0.5 * n) * (1.0 + log_ratio));
    best = std::max(best, value);
  }
  return best;
}

XiDerivativeBound xi_derivative_bound(const ShrinkerSurface& surface, const HomogeneousTestFunction& phi,
                                      double t, const QuadratureSpec& quad, double delta) {
  const int n = surface.dim();
  if (n < 2) throw DomainError("the Xi derivative bound needs n >= 2");
  XiDerivativeBound b;
  b.t = t;
  b.R = surface.exterior_radius().value_or(1.0);
  if (!(b.R >= 1.0)) throw DomainError("the Xi derivative bound needs the boundary radius R >= 1");
  if (!(t >= 1.0 + delta)) throw DomainError(fmt::format("t = {} is too close to 1 (need t >= 1 + {})", t, delta));
  if (!(t >= b.R * b.R)) throw DomainError("the Xi derivative bound needs t >= R^2");
  const geom::ResidualNorms res = geom::shrinker_residual(surface, quad);
  if (!(res.sup <= quad.shrinker_tol))
    throw PreconditionError(fmt::format("Xi derivative bound needs a shrinker (residual {:.6g})", res.sup), res.sup);

  b.fd_step = 1e-3 * t;
  const auto xp = functionals::eval_Xi(surface, phi, t + b.fd_step, quad);
  const auto xm = functionals::eval_Xi(surface, phi, t - b.fd_step, quad);
  b.numeric = std::abs(xp.value - xm.value) / (2.0 * b.fd_step);
  const double xi0 = std::abs(functionals::eval_Xi(surface, phi, t, quad).value);
  // Truncation error ~ step^2 |Xi'''| ~ (step/t)^2 |Xi| / t, plus rounding of the quadrature.
  b.slack = 10.0 * (std::pow(b.fd_step / t, 2) * xi0 / t + (xp.error + xm.error + quad.tol * xi0) / b.fd_step);

  b.c0 = geom::volume_growth_constant(surface);
  b.c1 = xi_bound_c1(n, b.c0, b.R);
  b.cR = 0.5 * std::pow(4.0 * std::numbers::pi, -0.5 * n) * b.R * geom::boundary_measure(surface);
  b.G = std::abs(functionals::eval_G(surface, t, quad).value);
  b.bound = b.c1 * (1.0 + std::log(t)) / (4.0 * t * (t - 1.0)) * phi.norm1() +
            b.cR * std::pow(t, -(0.5 * n + 1.0)) * phi.norm0() + (phi.norm0() + phi.norm1()) * b.G;
  b.margin = b.bound - b.numeric;
  b.holds = b.numeric <= b.bound + b.slack;
  return b;
}

}  // namespace shrinkerlab::monotonicity
