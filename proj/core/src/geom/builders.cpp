#include "shrinkerlab/geom/builders.hpp"

#include "shrinkerlab/errors.hpp"
#include "shrinkerlab/geom/geometry.hpp"

#include <cmath>
#include <numbers>

namespace shrinkerlab::geom {

ShrinkerSurface make_icosphere(double radius, int level) {
  if (!(radius > 0.0) || level < 0) throw DomainError("icosphere needs radius > 0 and level >= 0");
  const double phi = 0.5 * (1.0 + std::sqrt(5.0));
  const double raw[12][3] = {{-1, phi, 0}, {1, phi, 0},  {-1, -phi, 0}, {1, -phi, 0},
                             {0, -1, phi}, {0, 1, phi},  {0, -1, -phi}, {0, 1, -phi},
                             {phi, 0, -1}, {phi, 0, 1},  {-phi, 0, -1}, {-phi, 0, 1}};
  TriangleMesh mesh;
  for (const auto& p : raw) mesh.vertices.push_back(radius * Eigen::Vector3d(p[0], p[1], p[2]).normalized());
  mesh.faces = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11}, {1, 5, 9}, {5, 11, 4},
                {11, 10, 2}, {10, 7, 6}, {7, 1, 8},  {3, 9, 4},  {3, 4, 2},   {3, 2, 6}, {3, 6, 8},
                {3, 8, 9},  {4, 9, 5},  {2, 4, 11}, {6, 2, 10}, {8, 6, 7},   {9, 8, 1}};
  mesh.snap = [radius](const Vec& p) -> Vec { return radius * p.normalized(); };
  ShrinkerSurface s(std::move(mesh));
  for (int i = 0; i < level; ++i) s = refine(s).surface;
  return s;
}

ShrinkerSurface make_cylinder_mesh(double radius, double half_length, int around, int along) {
  if (!(radius > 0.0) || !(half_length > 0.0) || around < 3 || along < 1)
    throw DomainError("cylinder mesh parameters out of range");
  TriangleMesh mesh;
  const double dz = 2.0 * half_length / along;
  for (int j = 0; j <= along; ++j) {
    for (int i = 0; i < around; ++i) {
      const double th = 2.0 * std::numbers::pi * i / around;
      mesh.vertices.push_back(Eigen::Vector3d(radius * std::cos(th), radius * std::sin(th), -half_length + j * dz));
    }
  }
  for (int j = 0; j < along; ++j) {
    for (int i = 0; i < around; ++i) {
      const int a = j * around + i;
      const int b = j * around + (i + 1) % around;
      const int c = a + around;
      const int d = b + around;
      mesh.faces.push_back({a, b, d});
      mesh.faces.push_back({a, d, c});
    }
  }
  mesh.snap = [radius](const Vec& p) -> Vec {
    Vec q = p;
    q.head<2>() *= radius / p.head<2>().norm();
    return q;
  };
  return ShrinkerSurface(std::move(mesh));
}

ShrinkerSurface make_circle_polyline(double radius, int count) {
  if (!(radius > 0.0) || count < 4) throw DomainError("circle polyline needs radius > 0 and >= 4 vertices");
  PolylineCurve c;
  c.closed = true;
  for (int i = 0; i < count; ++i) {
    const double th = 2.0 * std::numbers::pi * i / count;
    c.vertices.push_back(Eigen::Vector2d(radius * std::cos(th), radius * std::sin(th)));
  }
  c.snap = [radius](const Vec& p) -> Vec { return radius * p.normalized(); };
  return ShrinkerSurface(std::move(c));
}

}  // namespace shrinkerlab::geom
