#pragma once

#include "shrinkerlab/functionals.hpp"

#include <vector>

namespace shrinkerlab::monotonicity {

using functionals::HomogeneousTestFunction;
using geom::QuadratureSpec;
using geom::ShrinkerSurface;

/// Both sides of F_{t2} - F_{t1} = boundary + normal, where
/// boundary = -int_{t1}^{t2} (1/2s) int_{dM} <X^T, nu> Phi_s ds and
/// normal   = -int_{t1}^{t2} (1/4s)(1 - 1/s) int_M |X^N|^2 Phi_s ds.
struct MonotonicityLedger {
  double t1 = 0.0;
  double t2 = 0.0;
  std::vector<double> t_grid;
  std::vector<double> F;
  double lhs = 0.0;
  double lhs_error = 0.0;
  double boundary = 0.0;
  double boundary_error = 0.0;
  double normal = 0.0;
  double normal_error = 0.0;
  double defect = 0.0;
  double budget = 0.0;  ///< combined error estimate the defect is held to
  bool pass = false;
};

MonotonicityLedger verify_monotonicity(const ShrinkerSurface& surface, double t1, double t2,
                                       const QuadratureSpec& quad = {});

struct XiDerivativeBound {
  double t = 0.0;
  double numeric = 0.0;  ///< |d/dt Xi_t| by centered difference
  double fd_step = 0.0;
  double bound = 0.0;
  double slack = 0.0;  ///< allowance for the difference quotient's own error
  double c0 = 0.0;
  double c1 = 0.0;
  double cR = 0.0;
  double R = 0.0;
  double G = 0.0;
  double margin = 0.0;  ///< bound - numeric
  bool holds = false;
};

/// Constant c1 of the Xi-derivative bound for dimension n, volume growth c0 and
/// inner radius R: the supremum over t >= R^2 of
/// c0 (S1 + S2(t)) / ((4 pi)^{n/2} (1 + log t - 2 log R)) with the dyadic sums S1, S2.
double xi_bound_c1(int n, double c0, double R);

/// Numeric |d/dt Xi_t(M, phi)| against
/// c1 (1 + log t)/(4 t (t-1)) |phi|_1 + cR t^{-(n/2+1)} |phi|_0 + (|phi|_0 + |phi|_1)|G_t|.
XiDerivativeBound xi_derivative_bound(const ShrinkerSurface& surface, const HomogeneousTestFunction& phi,
                                      double t, const QuadratureSpec& quad = {}, double delta = 0.05);

}  // namespace shrinkerlab::monotonicity
