#pragma once

#include "shrinkerlab/geom/surface.hpp"

namespace shrinkerlab::geom {

/// Icosahedron subdivided `level` times, vertices on the sphere of the given radius in R^3.
ShrinkerSurface make_icosphere(double radius, int level);

/// Structured triangulation of S^1(radius) x [-half_length, half_length] in R^3,
/// with `around` vertices per circle and `along` segments along the axis.
ShrinkerSurface make_cylinder_mesh(double radius, double half_length, int around, int along);

/// Closed polygon with `count` vertices on the circle of the given radius in R^2.
ShrinkerSurface make_circle_polyline(double radius, int count);

}  // namespace shrinkerlab::geom
