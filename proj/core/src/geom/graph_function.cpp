#include "shrinkerlab/geom/graph_function.hpp"

#include "shrinkerlab/errors.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace shrinkerlab::geom {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
}

GraphGrid GraphGrid::over_annulus(double inner, double outer, double h) {
  if (!(h > 0.0)) throw DomainError("graph grid spacing must be positive");
  if (!(inner > 0.0) || !(outer > inner))
    throw DomainError("graph annulus needs 0 < inner < outer (patches near the origin are rejected)");
  GraphGrid g;
  g.inner = inner;
  g.outer = outer;
  g.h = h;
  g.half = static_cast<int>(std::ceil(outer / h)) + 1;
  return g;
}

bool GraphGrid::contains(const Point2& x) const noexcept {
  const double r = x.norm();
  const double slack = 1e-9 * h;
  return r >= inner - slack && r <= outer + slack;
}

GraphFunction::GraphFunction(GraphGrid grid, int m, std::vector<double> values)
    : grid_(grid), m_(m), values_(std::move(values)) {
  if (m_ < 1) throw DomainError("graph codimension must be >= 1");
  if (values_.size() != static_cast<std::size_t>(grid_.node_count()) * m_)
    throw DomainError("graph value array has the wrong size");
  active_.assign(grid_.node_count(), 0);
  for (int node = 0; node < grid_.node_count(); ++node) {
    if (grid_.contains(grid_.position(node))) {
      active_[node] = 1;
      active_nodes_.push_back(node);
    }
  }
  if (active_nodes_.empty()) throw DomainError("graph annulus contains no grid nodes");
  compute_jets();
}

GraphFunction GraphFunction::sample(const GraphGrid& grid, int m, const Field& f) {
  std::vector<double> values(static_cast<std::size_t>(grid.node_count()) * m, 0.0);
  for (int node = 0; node < grid.node_count(); ++node) {
    const Point2 x = grid.position(node);
    if (!grid.contains(x)) continue;
    const Vec u = f(x);
    if (u.size() != m) throw DomainError("graph field returned the wrong number of components");
    for (int a = 0; a < m; ++a) values[static_cast<std::size_t>(node) * m + a] = u[a];
  }
  GraphFunction g(grid, m, std::move(values));
  g.set_source(f);
  return g;
}

bool GraphFunction::interior(int node) const noexcept {
  if (!active(node)) return false;
  const int i = grid_.col(node);
  const int j = grid_.row(node);
  for (int dj = -1; dj <= 1; ++dj)
    for (int di = -1; di <= 1; ++di)
      if (!active(i + di, j + dj)) return false;
  return true;
}

void GraphFunction::compute_jets() {
  const double h = grid_.h;
  const std::size_t count = static_cast<std::size_t>(grid_.node_count()) * m_;
  du_.assign(count * 2, kNaN);
  d2u_.assign(count * 4, kNaN);

  // Second-order first derivative of a node field along one axis.
  auto first = [&](int i, int j, int axis, auto&& val) {
    const int di = axis == 0 ? 1 : 0;
    const int dj = axis == 1 ? 1 : 0;
    if (active(i + di, j + dj) && active(i - di, j - dj))
      return (val(i + di, j + dj) - val(i - di, j - dj)) / (2.0 * h);
    if (active(i + di, j + dj) && active(i + 2 * di, j + 2 * dj))
      return (-3.0 * val(i, j) + 4.0 * val(i + di, j + dj) - val(i + 2 * di, j + 2 * dj)) / (2.0 * h);
    if (active(i - di, j - dj) && active(i - 2 * di, j - 2 * dj))
      return (3.0 * val(i, j) - 4.0 * val(i - di, j - dj) + val(i - 2 * di, j - 2 * dj)) / (2.0 * h);
    return kNaN;
  };
  auto second = [&](int i, int j, int axis, auto&& val) {
    const int di = axis == 0 ? 1 : 0;
    const int dj = axis == 1 ? 1 : 0;
    if (active(i + di, j + dj) && active(i - di, j - dj))
      return (val(i + di, j + dj) - 2.0 * val(i, j) + val(i - di, j - dj)) / (h * h);
    for (int s : {1, -1}) {
      const int a = s * di;
      const int b = s * dj;
      if (active(i + a, j + b) && active(i + 2 * a, j + 2 * b) && active(i + 3 * a, j + 3 * b))
        return (2.0 * val(i, j) - 5.0 * val(i + a, j + b) + 4.0 * val(i + 2 * a, j + 2 * b) -
                val(i + 3 * a, j + 3 * b)) /
               (h * h);
    }
    return kNaN;
  };

  for (int a = 0; a < m_; ++a) {
    auto u = [&](int i, int j) { return values_[static_cast<std::size_t>(grid_.index(i, j)) * m_ + a]; };
    for (int node : active_nodes_) {
      const int i = grid_.col(node);
      const int j = grid_.row(node);
      const std::size_t base = static_cast<std::size_t>(node) * m_ + a;
      du_[base * 2 + 0] = first(i, j, 0, u);
      du_[base * 2 + 1] = first(i, j, 1, u);
      d2u_[base * 4 + 0] = second(i, j, 0, u);
      d2u_[base * 4 + 3] = second(i, j, 1, u);
    }
    auto ux = [&](int i, int j) { return du_[(static_cast<std::size_t>(grid_.index(i, j)) * m_ + a) * 2 + 0]; };
    auto uy = [&](int i, int j) { return du_[(static_cast<std::size_t>(grid_.index(i, j)) * m_ + a) * 2 + 1]; };
    for (int node : active_nodes_) {
      const int i = grid_.col(node);
      const int j = grid_.row(node);
      const std::size_t base = static_cast<std::size_t>(node) * m_ + a;
      const double mixed = 0.5 * (first(i, j, 1, ux) + first(i, j, 0, uy));
      d2u_[base * 4 + 1] = mixed;
      d2u_[base * 4 + 2] = mixed;
    }
  }
  for (int node : active_nodes_) {
    bool ok = true;
    for (int a = 0; a < m_ && ok; ++a) {
      const std::size_t base = static_cast<std::size_t>(node) * m_ + a;
      for (int c = 0; c < 2; ++c) ok = ok && std::isfinite(du_[base * 2 + c]);
      for (int c = 0; c < 4; ++c) ok = ok && std::isfinite(d2u_[base * 4 + c]);
    }
    if (!ok) stencil_failures_.push_back(node);
  }
}

GraphFunction::Jet GraphFunction::interpolate(const Point2& x) const {
  const double h = grid_.h;
  const double xi = x[0] / h + grid_.half;
  const double eta = x[1] / h + grid_.half;
  for (int npts : {6, 4}) {
    const int bi = static_cast<int>(std::floor(xi)) - (npts / 2 - 1);
    const int bj = static_cast<int>(std::floor(eta)) - (npts / 2 - 1);
    bool ok = true;
    for (int q = 0; q < npts && ok; ++q)
      for (int p = 0; p < npts && ok; ++p) ok = active(bi + p, bj + q);
    if (!ok) continue;
    const LagrangeWeights wx = lagrange_weights(xi - bi, npts);
    const LagrangeWeights wy = lagrange_weights(eta - bj, npts);
    Jet jet;
    jet.value = Vec::Zero(m_);
    jet.grad = Eigen::Matrix<double, Eigen::Dynamic, 2>::Zero(m_, 2);
    jet.hess.assign(m_, Eigen::Matrix2d::Zero());
    for (int q = 0; q < npts; ++q) {
      for (int p = 0; p < npts; ++p) {
        const int node = grid_.index(bi + p, bj + q);
        for (int a = 0; a < m_; ++a) {
          const double u = value(node, a);
          jet.value[a] += wx.w0[p] * wy.w0[q] * u;
          jet.grad(a, 0) += wx.w1[p] * wy.w0[q] * u / h;
          jet.grad(a, 1) += wx.w0[p] * wy.w1[q] * u / h;
          jet.hess[a](0, 0) += wx.w2[p] * wy.w0[q] * u / (h * h);
          jet.hess[a](1, 1) += wx.w0[p] * wy.w2[q] * u / (h * h);
          jet.hess[a](0, 1) += wx.w1[p] * wy.w1[q] * u / (h * h);
        }
      }
    }
    for (auto& hs : jet.hess) hs(1, 0) = hs(0, 1);
    return jet;
  }
  throw DomainError("graph interpolation stencil leaves the annulus at (" + std::to_string(x[0]) +
                    ", " + std::to_string(x[1]) + ")");
}

GraphFunction GraphFunction::refined() const {
  const GraphGrid fine = GraphGrid::over_annulus(grid_.inner, grid_.outer, 0.5 * grid_.h);
  if (source_) return sample(fine, m_, source_);
  std::vector<double> values(static_cast<std::size_t>(fine.node_count()) * m_, 0.0);
  for (int node = 0; node < fine.node_count(); ++node) {
    const Point2 x = fine.position(node);
    if (!fine.contains(x)) continue;
    Vec u;
    const int ci = static_cast<int>(std::lround(x[0] / grid_.h)) + grid_.half;
    const int cj = static_cast<int>(std::lround(x[1] / grid_.h)) + grid_.half;
    const bool on_coarse = std::abs(x[0] / grid_.h - std::round(x[0] / grid_.h)) < 1e-9 &&
                           std::abs(x[1] / grid_.h - std::round(x[1] / grid_.h)) < 1e-9;
    if (on_coarse && active(ci, cj)) {
      u.resize(m_);
      for (int a = 0; a < m_; ++a) u[a] = value(grid_.index(ci, cj), a);
    } else {
      try {
        u = interpolate(x).value;
      } catch (const DomainError&) {
        // Near the annulus edge: second-order Taylor expansion from the nearest active node.
        int best = active_nodes_.front();
        for (int nd : active_nodes_)
          if ((grid_.position(nd) - x).squaredNorm() < (grid_.position(best) - x).squaredNorm()) best = nd;
        const Point2 d = x - grid_.position(best);
        u.resize(m_);
        for (int a = 0; a < m_; ++a) {
          u[a] = value(best, a) + du(best, a, 0) * d[0] + du(best, a, 1) * d[1] +
                 0.5 * (d2u(best, a, 0, 0) * d[0] * d[0] + 2.0 * d2u(best, a, 0, 1) * d[0] * d[1] +
                        d2u(best, a, 1, 1) * d[1] * d[1]);
        }
      }
    }
    for (int a = 0; a < m_; ++a) values[static_cast<std::size_t>(node) * m_ + a] = u[a];
  }
  return GraphFunction(fine, m_, std::move(values));
}

}  // namespace shrinkerlab::geom
