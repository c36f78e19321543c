#pragma once

#include "shrinkerlab/geom/sample.hpp"
#include "shrinkerlab/geom/surface.hpp"

#include <optional>

namespace shrinkerlab::geom::detail {

/// Analytic kinds as generalised cylinders S^k(rho) x R^d, X = rho*S*omega + E*z.
/// Planes have no sphere factor.
struct AnalyticFrame {
  bool has_sphere = false;
  int k = 0;
  double rho = 0.0;
  Mat S;  ///< ambient x (k+1)
  Mat E;  ///< ambient x d
  int d = 0;
  double exterior = 0.0;  ///< 0 when uncut
};

std::optional<AnalyticFrame> analytic_frame(const ShrinkerSurface& surface);

/// Closed-form geometry at omega (unit, k+1 entries; ignored for planes) and z in R^d.
GeometrySample analytic_sample(const AnalyticFrame& f, const Vec& omega, const Vec& z);

}  // namespace shrinkerlab::geom::detail
