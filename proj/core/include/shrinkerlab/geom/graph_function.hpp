#pragma once

#include "shrinkerlab/numerics.hpp"

#include <Eigen/Dense>

#include <functional>
#include <optional>
#include <vector>

namespace shrinkerlab::geom {

using Point2 = Eigen::Vector2d;

/// Square Cartesian grid over [-L, L]^2 with L = half*h. Nodes inside the
/// annulus inner <= |x| <= outer are active.
struct GraphGrid {
  double inner = 1.0;
  double outer = 2.0;
  double h = 0.1;
  int half = 20;

  static GraphGrid over_annulus(double inner, double outer, double h);

  int side() const noexcept { return 2 * half + 1; }
  int node_count() const noexcept { return side() * side(); }
  int index(int i, int j) const noexcept { return j * side() + i; }
  int col(int node) const noexcept { return node % side(); }
  int row(int node) const noexcept { return node / side(); }
  Point2 position(int i, int j) const noexcept { return {(i - half) * h, (j - half) * h}; }
  Point2 position(int node) const noexcept { return position(col(node), row(node)); }
  bool in_range(int i, int j) const noexcept { return i >= 0 && j >= 0 && i < side() && j < side(); }
  bool contains(const Point2& x) const noexcept;
};

/// Heights u^alpha (alpha = 1..m) sampled on a GraphGrid, with second-order
/// finite-difference jets (centered where possible, one-sided at annulus edges).
class GraphFunction {
 public:
  using Field = std::function<Vec(const Point2&)>;

  /// `values` holds m entries per node (node-major); inactive entries are ignored.
  GraphFunction(GraphGrid grid, int m, std::vector<double> values);

  static GraphFunction sample(const GraphGrid& grid, int m, const Field& f);

  const GraphGrid& grid() const noexcept { return grid_; }
  int m() const noexcept { return m_; }

  bool active(int node) const noexcept { return active_[node] != 0; }
  bool active(int i, int j) const noexcept {
    return grid_.in_range(i, j) && active_[grid_.index(i, j)] != 0;
  }
  /// Active with its full 3x3 block active (centered stencils apply).
  bool interior(int node) const noexcept;
  const std::vector<int>& active_nodes() const noexcept { return active_nodes_; }

  double value(int node, int alpha) const noexcept { return values_[node * m_ + alpha]; }
  const std::vector<double>& values() const noexcept { return values_; }

  /// du^alpha/dx_i at an active node.
  double du(int node, int alpha, int i) const noexcept {
    return du_[(static_cast<std::size_t>(node) * m_ + alpha) * 2 + i];
  }
  /// d^2u^alpha/dx_i dx_j at an active node.
  double d2u(int node, int alpha, int i, int j) const noexcept {
    return d2u_[(static_cast<std::size_t>(node) * m_ + alpha) * 4 + 2 * i + j];
  }
  /// Nodes where no second-order stencil exists; their derivatives are NaN.
  const std::vector<int>& stencil_failures() const noexcept { return stencil_failures_; }

  struct Jet {
    Vec value;                          ///< m
    Eigen::Matrix<double, Eigen::Dynamic, 2> grad;  ///< m x 2
    std::vector<Eigen::Matrix2d> hess;  ///< m Hessians
  };
  /// Tensor Lagrange interpolation (6 points per axis, 4 near edges) of the
  /// grid values; derivatives are those of the interpolant.
  Jet interpolate(const Point2& x) const;

  /// Spacing h/2: resampled from the generating field when known, interpolated otherwise.
  GraphFunction refined() const;

  void set_source(Field f) { source_ = std::move(f); }
  const Field& source() const noexcept { return source_; }

 private:
  void compute_jets();

  GraphGrid grid_;
  int m_;
  std::vector<double> values_;
  std::vector<unsigned char> active_;
  std::vector<int> active_nodes_;
  std::vector<double> du_;
  std::vector<double> d2u_;
  std::vector<int> stencil_failures_;
  Field source_;
};

}  // namespace shrinkerlab::geom
