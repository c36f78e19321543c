#pragma once

#include "shrinkerlab/geom/surface.hpp"
#include "shrinkerlab/numerics.hpp"

#include <functional>
#include <limits>
#include <optional>

namespace shrinkerlab::geom {

/// Truncated Gaussian quadrature settings. rho_max = 0 selects the default
/// radius for the time at hand.
struct QuadratureSpec {
  double rho_max = 0.0;
  double tol = 1e-10;
  unsigned max_depth = 15;
  double shrinker_tol = 1e-8;  ///< residual accepted by shrinker preconditions
};

struct Ball {
  Vec center;
  double radius = 0.0;
};

/// Portion of the surface with r_min <= |X| <= r_max, optionally intersected with a ball.
struct Region {
  double r_min = 0.0;
  double r_max = std::numeric_limits<double>::infinity();
  std::optional<Ball> ball;
};

using Integrand = std::function<double(const GeometrySample&)>;
using BoundaryIntegrand = std::function<double(const GeometrySample&, const Vec& conormal)>;

/// Integral of f over the surface inside the region. Analytic kinds use nested
/// adaptive Gauss-Kronrod in sphere angles and the Euclidean radius; discrete kinds
/// sum element weights (error estimate 0).
Integral integrate(const ShrinkerSurface& surface, const Integrand& f, const Region& region,
                   double tol, unsigned max_depth = 15);

/// Integral over the boundary with respect to (n-1)-dimensional measure; the
/// conormal points out of the surface.
Integral integrate_boundary(const ShrinkerSurface& surface, const BoundaryIntegrand& f, double tol);

/// H^{n-1} of the boundary.
double boundary_measure(const ShrinkerSurface& surface);

/// vol(M cap B_r).
double ball_volume(const ShrinkerSurface& surface, double r);

/// Measured Euclidean volume growth constant: max of vol(M cap B_r) / r^n over a geometric r-grid.
double volume_growth_constant(const ShrinkerSurface& surface);

/// Inf and sup of |X| over the surface (sup is +inf for non-compact analytic kinds).
double min_radius(const ShrinkerSurface& surface);
double max_radius(const ShrinkerSurface& surface);

}  // namespace shrinkerlab::geom
