#pragma once

#include "shrinkerlab/functionals.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace shrinkerlab::cones {

using functionals::HomogeneousTestFunction;
using geom::QuadratureSpec;
using geom::ShrinkerSurface;

/// M_t = t^{-1} M.
ShrinkerSurface rescale(const ShrinkerSurface& surface, double t);

struct ProfilePoint {
  double r = 0.0;
  double value = 0.0;  ///< r^{-n} int_{M cap B_r} phi
  bool skipped = false;  ///< r below the inner radius of the surface
};

struct RadialProfile {
  std::string phi_id;
  std::vector<ProfilePoint> points;
  double spread = 0.0;  ///< max - min over points that were not skipped
};

RadialProfile radial_mass_profile(const ShrinkerSurface& surface, const HomogeneousTestFunction& phi,
                                  const std::vector<double>& radii, const QuadratureSpec& quad = {});

/// Points of (M cap dB_r) / r on the unit sphere; `params` are the shared random
/// parameters (see cross_section_parameters).
std::vector<Vec> cross_section(const ShrinkerSurface& surface, double r, const std::vector<Vec>& params);

/// Random parameters for `count` cross-section points, drawn once from `seed`.
std::vector<Vec> cross_section_parameters(const ShrinkerSurface& surface, std::size_t count, std::uint64_t seed);

struct ConeDeviation {
  double deviation = 0.0;  ///< symmetric Hausdorff distance on the unit sphere
  std::vector<Vec> section_a;
  std::vector<Vec> section_b;
};

/// Distance between (M_{ta} cap dB_r)/r and (M_{tb} cap dB_r)/r.
ConeDeviation cone_deviation(const ShrinkerSurface& surface, double ta, double tb, double r, std::size_t count,
                             std::uint64_t seed);

struct XiScalePoint {
  double scale = 0.0;
  double xi_rescaled = 0.0;  ///< Xi_1(t^{-1} M)
  double xi_direct = 0.0;    ///< Xi_{t^2}(M)
};

struct XiLimitReport {
  std::vector<XiScalePoint> points;
  double spread = 0.0;            ///< max - min of xi_rescaled
  double identity_error = 0.0;    ///< max relative |xi_rescaled - xi_direct|
};

XiLimitReport xi_limit_consistency(const ShrinkerSurface& surface, const HomogeneousTestFunction& phi,
                                   const std::vector<double>& scales, const QuadratureSpec& quad = {});

struct ConeReport {
  std::vector<double> scales;
  std::vector<RadialProfile> profiles;
  std::vector<double> deviations;  ///< consecutive scale pairs
  double max_deviation = 0.0;
  bool constant_profiles = false;  ///< every profile spread below the threshold
};

}  // namespace shrinkerlab::cones
