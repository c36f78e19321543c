#include "shrinkerlab/functionals.hpp"

#include "shrinkerlab/errors.hpp"
#include "shrinkerlab/geom/geometry.hpp"

#include <fmt/format.h>

#include <cmath>

namespace shrinkerlab::functionals {

using geom::GeometrySample;
using geom::Region;

double Phi(int n, double t, const Vec& X) {
  return gaussian_normalisation(n, t) * std::exp(-X.squaredNorm() / (4.0 * t));
}

double truncation_radius(const ShrinkerSurface& surface, double t, const QuadratureSpec& quad) {
  if (!(t > 0.0)) throw DomainError("time must be positive");
  return quad.rho_max > 0.0 ? quad.rho_max : default_truncation_radius(surface.dim(), t, quad.tol);
}

Integral gaussian_integral(const ShrinkerSurface& surface, double t, const geom::Integrand& g,
                           const QuadratureSpec& quad) {
  const double rho = truncation_radius(surface, t, quad);
  const int n = surface.dim();
  const Region region{0.0, rho, std::nullopt};
  const double inv4t = 1.0 / (4.0 * t);
  Integral raw = geom::integrate(
      surface, [&](const GeometrySample& s) { return g(s) * std::exp(-s.X.squaredNorm() * inv4t); }, region,
      quad.tol, quad.max_depth);
  if (geom::max_radius(surface) > rho) {
    const Integral mass = geom::integrate(
        surface, [&](const GeometrySample& s) { return std::exp(-s.X.squaredNorm() * inv4t); }, region, quad.tol,
        quad.max_depth);
    const double c0 = geom::volume_growth_constant(surface);
    const double tail = c0 * std::pow(rho, n) * std::exp(-rho * rho * inv4t);
    if (!(tail < quad.tol * mass.value)) {
      double suggested = rho;
      while (c0 * std::pow(suggested, n) * std::exp(-suggested * suggested * inv4t) >= quad.tol * mass.value &&
             suggested < 1e6 * rho)
        suggested *= 1.25;
      throw TruncationError(
          fmt::format("Gaussian tail {:.3g} beyond radius {:.6g} exceeds tol x mass {:.3g}", tail, rho,
                      quad.tol * mass.value),
          suggested);
    }
  }
  const double norm = gaussian_normalisation(n, t);
  raw.value *= norm;
  raw.error *= norm;
  return raw;
}

XiValue eval_Xi(const ShrinkerSurface& surface, const HomogeneousTestFunction& phi, double t,
                const QuadratureSpec& quad) {
  XiValue out;
  const Integral I = gaussian_integral(
      surface, t,
      [&](const GeometrySample& s) {
        const double r = s.X.norm();
        if (r < 1e-9) {
          ++out.dropped;
          return 0.0;
        }
        return phi(s.X / r);
      },
      quad);
  out.value = I.value;
  out.error = I.error;
  return out;
}

Integral eval_F(const ShrinkerSurface& surface, double t, const QuadratureSpec& quad) {
  const XiValue xi = eval_Xi(surface, HomogeneousTestFunction::constant(), t, quad);
  return {xi.value, xi.error};
}

Integral boundary_flux(const ShrinkerSurface& surface, double t, const QuadratureSpec& quad) {
  if (!(t > 0.0)) throw DomainError("time must be positive");
  const int n = surface.dim();
  Integral I = geom::integrate_boundary(
      surface, [&](const GeometrySample& s, const Vec& nu) { return s.XT.dot(nu) * Phi(n, t, s.X); }, quad.tol);
  I.value *= -1.0 / (2.0 * t);
  I.error /= 2.0 * t;
  return I;
}

Integral eval_G(const ShrinkerSurface& surface, double t, const QuadratureSpec& quad) {
  Integral I = gaussian_integral(surface, t, [](const GeometrySample& s) { return s.XN.squaredNorm(); }, quad);
  const double c = -(1.0 / (4.0 * t)) * (1.0 - 1.0 / t);
  I.value *= c;
  I.error *= std::abs(c);
  return I;
}

Integral eval_F_prime(const ShrinkerSurface& surface, double t, const QuadratureSpec& quad) {
  const geom::ResidualNorms res = geom::shrinker_residual(surface, quad);
  if (!(res.sup <= quad.shrinker_tol))
    throw PreconditionError(
        fmt::format("closed-form F' needs a shrinker (residual {:.6g} > {:.3g})", res.sup, quad.shrinker_tol),
        res.sup);
  Integral out = boundary_flux(surface, t, quad);
  out += eval_G(surface, t, quad);
  return out;
}

}  // namespace shrinkerlab::functionals
