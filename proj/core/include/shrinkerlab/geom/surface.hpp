#pragma once

#include "shrinkerlab/geom/graph_function.hpp"
#include "shrinkerlab/geom/sample.hpp"
#include "shrinkerlab/numerics.hpp"

#include <array>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace shrinkerlab::geom {

/// Closest-point map used to place new vertices during refinement.
using Projector = std::function<Vec(const Vec&)>;

/// n-plane through the origin spanned by orthonormal columns of `basis`.
struct Plane {
  Mat basis;
};

/// Round n-sphere of the given radius centred at the origin of R^{n+1}.
struct RoundSphere {
  int n = 2;
  double radius = 1.0;
};

/// S^k(radius) x R^{n-k} in R^{n+1}. `axis` spans the Euclidean factor
/// ((n+1) x (n-k), orthonormal); the sphere factor lives in its complement.
struct RoundCylinder {
  int n = 2;
  int k = 1;
  double radius = 1.0;
  Mat axis;
};

/// Graph of u : annulus in R^2 -> R^m.
struct GraphPatch {
  std::shared_ptr<const GraphFunction> graph;
};

/// Surface triangulation (n = 2) in R^{2+m}.
struct TriangleMesh {
  std::vector<Vec> vertices;
  std::vector<std::array<int, 3>> faces;
  Projector snap;  ///< optional; applied to midpoints on refinement
};

/// Curve (n = 1) in R^{1+m} through ordered vertices.
struct PolylineCurve {
  std::vector<Vec> vertices;
  bool closed = false;
  Projector snap;
};

/// Per-element data of a discrete surface: one sample per vertex/node.
struct DiscreteData {
  std::vector<Vec> positions;
  std::vector<double> weights;             ///< area (length) element per vertex/node
  std::vector<std::optional<GeometrySample>> samples;
  std::vector<std::string> fit_errors;     ///< non-empty where the local fit failed
  std::vector<double> laplace_norm_sq;     ///< Laplace-Beltrami of |X|^2 per element
  /// Boundary elements with their share of boundary measure and outward conormal.
  struct BoundaryElement {
    int element;
    double measure;
    Vec conormal;
  };
  std::vector<BoundaryElement> boundary;
  std::vector<int> graph_nodes;             ///< graph patches: grid node of each element
};

/// Immutable analytic or discrete immersed submanifold, optionally cut to
/// the exterior of a ball B_R (then its boundary lies on the sphere of radius R).
class ShrinkerSurface {
 public:
  using Kind = std::variant<Plane, RoundSphere, RoundCylinder, GraphPatch, TriangleMesh, PolylineCurve>;

  explicit ShrinkerSurface(Kind kind, std::optional<double> exterior_radius = std::nullopt,
                           std::string label = {});

  const Kind& kind() const noexcept;
  int dim() const noexcept;
  int ambient_dim() const noexcept;
  int codim() const noexcept { return ambient_dim() - dim(); }
  std::optional<double> exterior_radius() const noexcept;
  bool is_analytic() const noexcept;
  std::string kind_name() const;
  const std::string& label() const noexcept;
  std::string describe() const;

  /// Plane through the origin, round sphere of radius sqrt(2n), or cylinder
  /// with sphere factor of radius sqrt(2k).
  bool is_catalog_shrinker() const noexcept;

  /// Number of discrete elements (vertices / active graph nodes); 0 for analytic kinds.
  std::size_t element_count() const noexcept;
  /// Throws DomainError for analytic kinds.
  const DiscreteData& discrete() const;
  /// Ambient position of a discrete element.
  const Vec& element_position(std::size_t element) const;

  ShrinkerSurface with_exterior(double radius) const;
  ShrinkerSurface with_label(std::string label) const;

 private:
  struct State;
  std::shared_ptr<const State> state_;
};

// Constructors for the catalog.
ShrinkerSurface make_plane(int n, int m, std::optional<double> exterior_radius = std::nullopt);
ShrinkerSurface make_plane(Mat basis, std::optional<double> exterior_radius = std::nullopt);
ShrinkerSurface make_sphere(int n, double radius);
ShrinkerSurface make_cylinder(int n, int k, double radius,
                              std::optional<double> exterior_radius = std::nullopt);
ShrinkerSurface make_graph_patch(GraphFunction graph);

}  // namespace shrinkerlab::geom
