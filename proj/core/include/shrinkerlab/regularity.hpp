#pragma once

#include "shrinkerlab/geom/integrate.hpp"
#include "shrinkerlab/geom/surface.hpp"

#include <string>
#include <vector>

namespace shrinkerlab::regularity {

using geom::QuadratureSpec;
using geom::ShrinkerSurface;

/// Lebesgue integrals of |B|^p (or |H|^p) over the annuli B_{2r} \ B_r.
struct AnnulusCurvatureProfile {
  double p = 0.0;
  bool mean_curvature = false;  ///< |H| in place of |B|
  std::vector<double> radii;
  std::vector<double> values;
  std::vector<double> running_sup;  ///< sup of values over radii >= radii[i]
  std::vector<std::string> notices;

  /// sup over annuli with inner radius >= r (grid radii only).
  double sup_from(double r) const;
  /// False when the tail of the profile does not decay: log-log slope of the
  /// last half above -0.25, or the last value above the first.
  bool decays() const;
};

/// p in [n, n+2] for |B| (any p >= 2 for |H|); radii ascending and positive.
AnnulusCurvatureProfile annulus_profile(const ShrinkerSurface& surface, double p, const std::vector<double>& radii,
                                        const QuadratureSpec& quad = {}, bool mean_curvature = false);

struct IGridSpec {
  std::size_t r_points = 33;    ///< initial samples of r over [1/2, 1/sqrt(-t0)]
  std::size_t max_refinements = 5;
  double tol = 0.01;            ///< relative change accepted between refinements
};

struct IValue {
  double value = 0.0;
  double rho = 0.0;        ///< location of the sup
  double rho_prime = 0.0;  ///< equal to rho when the sup is the diagonal limit
  std::size_t r_points = 0;
  std::vector<double> history;  ///< sup per refinement level
  bool specialized_range = false;  ///< -1/4 < t0 < 0
};

/// Scaled space-time |B|^p integral of the self-similar flow sqrt(-t) M at (X0, t0),
/// as a sup over a grid of sqrt(-t0) <= rho < rho' <= 2. Throws PreconditionError
/// for surfaces that are not shrinkers and ConvergenceError when the sup does not settle.
IValue eval_I(const ShrinkerSurface& surface, const Vec& X0, double t0, double p, const IGridSpec& grid = {},
              const QuadratureSpec& quad = {});

struct ChainBound {
  double bound = 0.0;        ///< (2/(2+n-p)) sup of the annulus integrals
  double annulus_sup = 0.0;
  double s_min = 0.0;        ///< (|X0|-2)/2
  double s_max = 0.0;        ///< (|X0|-2)/sqrt(-t0)
  bool containment = false;  ///< |X0| >= 6, so B_{2r}(r X0) sits inside the annulus at (|X0|-2) r
};

/// Right-hand side of the chain I <= (2/(2+n-p)) sup_s int_{B_{2s}\B_s} |B|^p over the
/// s reached by the balls B_{2r}(r X0), r in [1/2, 1/sqrt(-t0)]. Needs p < n+2.
ChainBound chain_bound(const ShrinkerSurface& surface, const Vec& X0, double t0, double p,
                       std::size_t samples = 33, const QuadratureSpec& quad = {});

struct AlphaScan {
  double alpha = 0.0;
  double scanned_max = 0.0;  ///< largest grid value of (s^{2a}-1)/(s^2-1)^a
  double supremum = 0.0;     ///< grid maximum extrapolated along the 1 - c s^{-2a} tail
  bool monotone = false;     ///< nondecreasing along the grid
  std::vector<double> s;
  std::vector<double> values;
};

/// Scan of (s^{2a}-1)/(s^2-1)^a over a geometric grid on [s_min, s_max], a in (0, 1].
AlphaScan alpha_supremum(double alpha, double s_min = 1.0 + 1e-6, double s_max = 1e6, std::size_t points = 241);

struct CurvatureEstimate {
  double r = 0.0;
  double t = 0.0;
  double lhs = 0.0;       ///< sup of |B| on M cap dB_{(r+1)t}
  double rhs_core = 0.0;  ///< (1/t) (sup_{s>=r} annulus integral)^{1/p}
  double ratio = 0.0;
  bool hypothesis_met = true;  ///< the profile decays
};

/// Needs t > 4 and a profile of |B|^p with a radius >= r. Throws DomainError on an empty slice.
CurvatureEstimate curvature_estimate_ratio(const ShrinkerSurface& surface, double r, double t,
                                           const AnnulusCurvatureProfile& profile);

struct VolumeGrowthCurve {
  double shift = 0.0;  ///< s in [0, 1)
  double p = 2.0;      ///< exponent of the |H| integrals
  std::vector<double> radii;
  std::vector<double> area;      ///< int_{E_r} 1
  std::vector<double> H_p;       ///< int_{E_r} |H|^p
  std::vector<double> V;         ///< r^{-n+s} area
  std::vector<double> residual;  ///< dV/dr - (V/r)(s - 2 H_p^{2/p} area^{-2/p})
  double min_scaled_residual = 0.0;  ///< min of residual * r / V
  AnnulusCurvatureProfile H_profile;
  bool hypothesis_met = true;    ///< annulus |H|^p integrals stay bounded
};

/// The surface (or its exterior part) is the end. Throws DomainError when E_r is empty.
VolumeGrowthCurve volume_growth(const ShrinkerSurface& surface, double shift, const std::vector<double>& radii,
                                const QuadratureSpec& quad = {}, double p = 2.0);

}  // namespace shrinkerlab::regularity
