#pragma once

#include "shrinkerlab/geom/integrate.hpp"
#include "shrinkerlab/geom/sample.hpp"
#include "shrinkerlab/geom/surface.hpp"

#include <string>
#include <vector>

namespace shrinkerlab::geom {

/// Geometry at a discrete element (vertex or graph node). Throws FitError if the
/// local fit failed there, DomainError for analytic kinds or bad indices.
GeometrySample sample_element(const ShrinkerSurface& surface, std::size_t element);

/// Geometry of an analytic surface at an ambient point lying on it (closed forms).
GeometrySample sample_at(const ShrinkerSurface& surface, const Vec& X);

struct ResidualNorms {
  double sup = 0.0;
  double l2 = 0.0;  ///< L^2 norm against Phi_1
};

/// Norms of H + X^N/2.
ResidualNorms shrinker_residual(const ShrinkerSurface& surface, const QuadratureSpec& quad = {});

struct DriftResidual {
  std::vector<double> field;  ///< per element; one constant entry for analytic kinds
  double sup = 0.0;
};

/// Delta|X|^2 + |X^N|^2 - 2n. Throws PreconditionError if the surface is not a
/// shrinker to within shrinker_tol.
DriftResidual drift_identity_residual(const ShrinkerSurface& surface, double shrinker_tol);

struct Refinement {
  ShrinkerSurface surface;
  std::string notice;  ///< non-empty when nothing was refined
};

/// One level of subdivision: 4F faces for meshes, doubled vertices for curves, h/2 for graphs.
Refinement refine(const ShrinkerSurface& surface);

}  // namespace shrinkerlab::geom
