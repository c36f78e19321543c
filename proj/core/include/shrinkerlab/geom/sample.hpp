#pragma once

#include "shrinkerlab/numerics.hpp"

#include <span>

namespace shrinkerlab::geom {

/// Pointwise geometry of an immersed n-submanifold of R^{n+m}.
struct GeometrySample {
  Vec X;          ///< position
  Mat tangent;    ///< ambient x n, orthonormal columns
  Vec XT;         ///< tangential projection of X
  Vec XN;         ///< normal projection of X
  Vec H;          ///< mean curvature vector (trace of B)
  double B_norm;  ///< full second fundamental form norm |B|
  double weight;  ///< area element: 1 for pointwise analytic samples, cell measure otherwise
};

/// Geometry from a local parametrisation: position X, first derivatives
/// (columns of `d1`, ambient x n) and second derivatives d2[i*n + j].
/// Parametrisation-invariant, valid in any codimension.
GeometrySample geometry_from_jet(const Vec& X, const Mat& d1, std::span<const Vec> d2,
                                 double weight);

/// Laplace-Beltrami of a scalar f at the jet point, from its coordinate
/// gradient and Hessian in the same parametrisation as (d1, d2).
double laplace_beltrami_from_jet(const Mat& d1, std::span<const Vec> d2, const Vec& f_grad,
                                 const Mat& f_hess);

}  // namespace shrinkerlab::geom
