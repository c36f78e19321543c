#pragma once

#include "shrinkerlab/geom/integrate.hpp"
#include "shrinkerlab/geom/surface.hpp"
#include "shrinkerlab/test_function.hpp"

#include <cstddef>

namespace shrinkerlab::functionals {

using geom::QuadratureSpec;
using geom::ShrinkerSurface;

/// Kernel (4 pi t)^{-n/2} exp(-|X|^2 / 4t).
double Phi(int n, double t, const Vec& X);

/// Truncation radius in use for time t: quad.rho_max if set, the default otherwise.
double truncation_radius(const ShrinkerSurface& surface, double t, const QuadratureSpec& quad);

/// (4 pi t)^{-n/2} int_M g exp(-|X|^2/4t) over |X| <= rho_max, after checking the
/// Gaussian tail c0 rho^n exp(-rho^2/4t) against tol times the mass. Throws
/// TruncationError with a suggested radius when the tail is not negligible.
Integral gaussian_integral(const ShrinkerSurface& surface, double t, const geom::Integrand& g,
                           const QuadratureSpec& quad);

/// F_t(M).
Integral eval_F(const ShrinkerSurface& surface, double t, const QuadratureSpec& quad = {});

/// Boundary part -(1/2t) int_{dM} <X^T, nu> Phi_t.
Integral boundary_flux(const ShrinkerSurface& surface, double t, const QuadratureSpec& quad = {});

/// G_t(M) = -(1/4t)(1 - 1/t) int_M |X^N|^2 Phi_t.
Integral eval_G(const ShrinkerSurface& surface, double t, const QuadratureSpec& quad = {});

/// Closed form of dF_t/dt for shrinkers: boundary flux plus G_t. Throws
/// PreconditionError when the shrinker residual exceeds quad.shrinker_tol.
Integral eval_F_prime(const ShrinkerSurface& surface, double t, const QuadratureSpec& quad = {});

struct XiValue {
  double value = 0.0;
  double error = 0.0;
  std::size_t dropped = 0;  ///< samples within 1e-9 of the origin, left out
};

/// Xi_t(M, phi). With phi = constant this is the same computation as eval_F.
XiValue eval_Xi(const ShrinkerSurface& surface, const HomogeneousTestFunction& phi, double t,
                const QuadratureSpec& quad = {});

}  // namespace shrinkerlab::functionals
