#include "shrinkerlab/geom/surface.hpp"

#include "local_fit.hpp"
#include "shrinkerlab/errors.hpp"

#include <Eigen/QR>
#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

namespace shrinkerlab::geom {

struct ShrinkerSurface::State {
  Kind kind;
  std::optional<double> exterior;
  std::string label;
  int n = 0;
  int N = 0;
  std::optional<DiscreteData> discrete;
};

namespace {

void require_orthonormal(const Mat& basis, const char* what) {
  const Mat gram = basis.transpose() * basis;
  const double err = (gram - Mat::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff();
  if (!(err <= 1e-12)) throw DomainError(fmt::format("{} basis is not orthonormal (error {:.3g})", what, err));
}

// ---- triangle meshes -------------------------------------------------------

DiscreteData build_mesh(const TriangleMesh& mesh) {
  const std::size_t nv = mesh.vertices.size();
  if (nv < 3 || mesh.faces.empty()) throw DomainError("triangle mesh needs vertices and faces");
  const auto dim = mesh.vertices.front().size();
  if (dim < 3) throw DomainError("triangle mesh must live in R^{2+m} with m >= 1");
  Vec lo = mesh.vertices.front();
  Vec hi = lo;
  for (const Vec& v : mesh.vertices) {
    if (v.size() != dim) throw DomainError("triangle mesh vertices have mixed dimensions");
    if (!v.allFinite()) throw DomainError("triangle mesh has non-finite vertex");
    lo = lo.cwiseMin(v);
    hi = hi.cwiseMax(v);
  }
  const double scale_sq = (hi - lo).squaredNorm();

  DiscreteData out;
  out.positions = mesh.vertices;
  out.weights.assign(nv, 0.0);
  std::vector<std::set<int>> ring(nv);
  std::map<std::pair<int, int>, std::vector<int>> edge_faces;
  for (std::size_t f = 0; f < mesh.faces.size(); ++f) {
    const auto& tri = mesh.faces[f];
    for (int idx : tri)
      if (idx < 0 || static_cast<std::size_t>(idx) >= nv)
        throw DomainError(fmt::format("face {} references a missing vertex", f));
    const Vec e1 = mesh.vertices[tri[1]] - mesh.vertices[tri[0]];
    const Vec e2 = mesh.vertices[tri[2]] - mesh.vertices[tri[0]];
    const double area =
        0.5 * std::sqrt(std::max(0.0, e1.squaredNorm() * e2.squaredNorm() - std::pow(e1.dot(e2), 2)));
    if (!(area > 1e-14 * scale_sq)) throw DomainError(fmt::format("face {} is degenerate", f));
    for (int c = 0; c < 3; ++c) {
      const int a = tri[c];
      const int b = tri[(c + 1) % 3];
      out.weights[a] += area / 3.0;
      ring[a].insert(b);
      ring[b].insert(a);
      edge_faces[{std::min(a, b), std::max(a, b)}].push_back(static_cast<int>(f));
    }
  }

  out.samples.assign(nv, std::nullopt);
  out.fit_errors.assign(nv, {});
  out.laplace_norm_sq.assign(nv, std::numeric_limits<double>::quiet_NaN());
  for (std::size_t v = 0; v < nv; ++v) {
    const Vec& c = mesh.vertices[v];
    std::vector<Vec> one;
    for (int w : ring[v]) one.push_back(mesh.vertices[w]);
    if (one.size() < 2) {
      out.fit_errors[v] = "isolated vertex";
      continue;
    }
    const Mat chart = detail::principal_chart(c, one, 2);
    std::set<int> grown(ring[v].begin(), ring[v].end());
    grown.insert(static_cast<int>(v));
    std::optional<detail::Jet> jet;
    for (int level = 2; level <= 4 && !jet; ++level) {
      std::set<int> next = grown;
      for (int w : grown) next.insert(ring[w].begin(), ring[w].end());
      grown = std::move(next);
      std::vector<Vec> pts;
      pts.reserve(grown.size());
      for (int w : grown) pts.push_back(mesh.vertices[w]);
      jet = detail::fit_jet(c, pts, chart);
    }
    if (!jet) {
      out.fit_errors[v] = "rank-deficient neighbourhood";
      continue;
    }
    out.samples[v] = geometry_from_jet(c, jet->d1, jet->d2, out.weights[v]);
    out.laplace_norm_sq[v] = laplace_beltrami_from_jet(jet->d1, jet->d2, jet->f_grad, jet->f_hess);
  }

  // Boundary edges carry half their length to each endpoint, with the in-face
  // outward direction accumulated as the conormal.
  std::map<int, std::pair<double, Vec>> acc;
  for (const auto& [edge, faces] : edge_faces) {
    if (faces.size() != 1) continue;
    const auto& tri = mesh.faces[faces.front()];
    int third = tri[0];
    for (int idx : tri)
      if (idx != edge.first && idx != edge.second) third = idx;
    const Vec& a = mesh.vertices[edge.first];
    const Vec& b = mesh.vertices[edge.second];
    const Vec e = (b - a).normalized();
    Vec o = a - mesh.vertices[third];
    o -= o.dot(e) * e;
    const double len = (b - a).norm();
    for (int end : {edge.first, edge.second}) {
      auto& slot = acc[end];
      if (slot.second.size() == 0) slot.second = Vec::Zero(dim);
      slot.first += 0.5 * len;
      slot.second += 0.5 * len * o.normalized();
    }
  }
  for (auto& [v, m] : acc) {
    Vec nu = m.second;
    if (out.samples[v]) nu = out.samples[v]->tangent * (out.samples[v]->tangent.transpose() * nu);
    out.boundary.push_back({v, m.first, nu.normalized()});
  }
  return out;
}

// ---- polylines -------------------------------------------------------------

DiscreteData build_polyline(const PolylineCurve& curve) {
  const std::size_t nv = curve.vertices.size();
  if (nv < 2) throw DomainError("polyline needs at least two vertices");
  const auto dim = curve.vertices.front().size();
  if (dim < 2) throw DomainError("polyline must live in R^{1+m} with m >= 1");
  for (const Vec& v : curve.vertices)
    if (v.size() != dim || !v.allFinite()) throw DomainError("polyline vertices malformed");
  const std::size_t segs = curve.closed ? nv : nv - 1;
  DiscreteData out;
  out.positions = curve.vertices;
  out.weights.assign(nv, 0.0);
  for (std::size_t s = 0; s < segs; ++s) {
    const std::size_t a = s;
    const std::size_t b = (s + 1) % nv;
    const double len = (curve.vertices[b] - curve.vertices[a]).norm();
    if (!(len > 0.0)) throw DomainError(fmt::format("polyline segment {} has zero length", s));
    out.weights[a] += 0.5 * len;
    out.weights[b] += 0.5 * len;
  }
  out.samples.assign(nv, std::nullopt);
  out.fit_errors.assign(nv, {});
  out.laplace_norm_sq.assign(nv, std::numeric_limits<double>::quiet_NaN());
  const auto at = [&](long i) -> const Vec& {
    const long m = static_cast<long>(nv);
    return curve.vertices[static_cast<std::size_t>(((i % m) + m) % m)];
  };
  for (std::size_t v = 0; v < nv; ++v) {
    long first = static_cast<long>(v) - 2;
    if (!curve.closed) first = std::clamp(first, 0L, static_cast<long>(nv) - 5L);
    const long count = std::min<long>(5, static_cast<long>(nv));
    if (!curve.closed && nv < 5) first = 0;
    std::vector<Vec> pts;
    for (long i = first; i < first + count; ++i) pts.push_back(at(i));
    const Vec& c = curve.vertices[v];
    Vec dir = pts.back() - pts.front();
    Mat chart = dir.normalized();
    std::optional<detail::Jet> jet;
    if (nv >= 5) jet = detail::fit_jet(c, pts, chart);
    if (!jet) {
      out.fit_errors[v] = "rank-deficient neighbourhood";
      continue;
    }
    out.samples[v] = geometry_from_jet(c, jet->d1, jet->d2, out.weights[v]);
    out.laplace_norm_sq[v] = laplace_beltrami_from_jet(jet->d1, jet->d2, jet->f_grad, jet->f_hess);
  }
  if (!curve.closed) {
    for (auto [end, inner] : {std::pair<std::size_t, std::size_t>{0, 1}, {nv - 1, nv - 2}}) {
      Vec nu = curve.vertices[end] - curve.vertices[inner];
      if (out.samples[end]) nu = out.samples[end]->tangent * (out.samples[end]->tangent.transpose() * nu);
      out.boundary.push_back({static_cast<int>(end), 1.0, nu.normalized()});
    }
  }
  return out;
}

// ---- graph patches ---------------------------------------------------------

DiscreteData build_graph(const GraphFunction& g) {
  const int m = g.m();
  const double h = g.grid().h;
  DiscreteData out;
  const auto& nodes = g.active_nodes();
  out.graph_nodes = nodes;
  out.samples.assign(nodes.size(), std::nullopt);
  out.fit_errors.assign(nodes.size(), {});
  out.laplace_norm_sq.assign(nodes.size(), std::numeric_limits<double>::quiet_NaN());
  for (std::size_t e = 0; e < nodes.size(); ++e) {
    const int node = nodes[e];
    const Point2 x = g.grid().position(node);
    Vec X(2 + m);
    X.head<2>() = x;
    for (int a = 0; a < m; ++a) X[2 + a] = g.value(node, a);
    out.positions.push_back(X);
    Mat d1 = Mat::Zero(2 + m, 2);
    d1(0, 0) = 1.0;
    d1(1, 1) = 1.0;
    std::vector<Vec> d2(4, Vec::Zero(2 + m));
    bool ok = true;
    for (int a = 0; a < m; ++a) {
      for (int i = 0; i < 2; ++i) {
        d1(2 + a, i) = g.du(node, a, i);
        for (int j = 0; j < 2; ++j) d2[2 * i + j][2 + a] = g.d2u(node, a, i, j);
      }
    }
    ok = d1.allFinite();
    for (const Vec& v : d2) ok = ok && v.allFinite();
    const double weight = h * h * std::sqrt((d1.transpose() * d1).determinant());
    out.weights.push_back(ok ? weight : h * h);
    if (!ok) {
      out.fit_errors[e] = "no second-order stencil inside the annulus";
      continue;
    }
    out.samples[e] = geometry_from_jet(X, d1, d2, weight);
    Vec fg(2);
    Mat fh(2, 2);
    for (int i = 0; i < 2; ++i) {
      fg[i] = 2.0 * x[i];
      for (int a = 0; a < m; ++a) fg[i] += 2.0 * X[2 + a] * d1(2 + a, i);
      for (int j = 0; j < 2; ++j) {
        fh(i, j) = i == j ? 2.0 : 0.0;
        for (int a = 0; a < m; ++a)
          fh(i, j) += 2.0 * (d1(2 + a, i) * d1(2 + a, j) + X[2 + a] * d2[2 * i + j][2 + a]);
      }
    }
    out.laplace_norm_sq[e] = laplace_beltrami_from_jet(d1, d2, fg, fh);
  }
  return out;
}

}  // namespace

ShrinkerSurface::ShrinkerSurface(Kind kind, std::optional<double> exterior_radius, std::string label) {
  auto st = std::make_shared<State>();
  st->kind = std::move(kind);
  st->exterior = exterior_radius;
  st->label = std::move(label);
  if (exterior_radius && !(*exterior_radius > 0.0))
    throw DomainError("exterior radius must be positive");
  std::visit(
      [&](const auto& k) {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, Plane>) {
          if (k.basis.cols() < 1 || k.basis.rows() <= k.basis.cols())
            throw DomainError("plane basis must be (n+m) x n with n, m >= 1");
          require_orthonormal(k.basis, "plane");
          st->n = static_cast<int>(k.basis.cols());
          st->N = static_cast<int>(k.basis.rows());
        } else if constexpr (std::is_same_v<T, RoundSphere>) {
          if (k.n < 1) throw DomainError("sphere dimension must be >= 1");
          if (!(k.radius > 0.0)) throw DomainError("sphere radius must be positive");
          st->n = k.n;
          st->N = k.n + 1;
        } else if constexpr (std::is_same_v<T, RoundCylinder>) {
          if (k.k < 1 || k.k >= k.n) throw DomainError("cylinder needs 1 <= k < n");
          if (!(k.radius > 0.0)) throw DomainError("cylinder radius must be positive");
          if (k.axis.rows() != k.n + 1 || k.axis.cols() != k.n - k.k)
            throw DomainError("cylinder axis must be (n+1) x (n-k)");
          require_orthonormal(k.axis, "cylinder axis");
          st->n = k.n;
          st->N = k.n + 1;
        } else {
          if (exterior_radius)
            throw DomainError("exterior cut-off is only available for analytic kinds");
          if constexpr (std::is_same_v<T, GraphPatch>) {
            if (!k.graph) throw DomainError("graph patch without data");
            st->n = 2;
            st->N = 2 + k.graph->m();
            st->discrete = build_graph(*k.graph);
          } else if constexpr (std::is_same_v<T, TriangleMesh>) {
            st->discrete = build_mesh(k);
            st->n = 2;
            st->N = static_cast<int>(k.vertices.front().size());
          } else {
            st->discrete = build_polyline(k);
            st->n = 1;
            st->N = static_cast<int>(k.vertices.front().size());
          }
        }
      },
      st->kind);
  state_ = std::move(st);
}

const ShrinkerSurface::Kind& ShrinkerSurface::kind() const noexcept { return state_->kind; }
int ShrinkerSurface::dim() const noexcept { return state_->n; }
int ShrinkerSurface::ambient_dim() const noexcept { return state_->N; }
std::optional<double> ShrinkerSurface::exterior_radius() const noexcept { return state_->exterior; }
bool ShrinkerSurface::is_analytic() const noexcept { return !state_->discrete.has_value(); }
const std::string& ShrinkerSurface::label() const noexcept { return state_->label; }

std::string ShrinkerSurface::kind_name() const {
  static constexpr const char* names[] = {"plane", "sphere", "cylinder", "graph", "mesh", "polyline"};
  return names[state_->kind.index()];
}

std::string ShrinkerSurface::describe() const {
  std::string s = std::visit(
      [&](const auto& k) -> std::string {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, Plane>)
          return fmt::format("plane n={} m={}", dim(), codim());
        else if constexpr (std::is_same_v<T, RoundSphere>)
          return fmt::format("sphere n={} radius={:.12g}", k.n, k.radius);
        else if constexpr (std::is_same_v<T, RoundCylinder>)
          return fmt::format("cylinder n={} k={} radius={:.12g}", k.n, k.k, k.radius);
        else if constexpr (std::is_same_v<T, GraphPatch>)
          return fmt::format("graph m={} annulus=[{:.12g}, {:.12g}] h={:.6g} nodes={}", k.graph->m(),
                             k.graph->grid().inner, k.graph->grid().outer, k.graph->grid().h,
                             element_count());
        else if constexpr (std::is_same_v<T, TriangleMesh>)
          return fmt::format("mesh vertices={} faces={} ambient={}", k.vertices.size(), k.faces.size(),
                             ambient_dim());
        else
          return fmt::format("polyline vertices={} closed={} ambient={}", k.vertices.size(),
                             k.closed ? "yes" : "no", ambient_dim());
      },
      state_->kind);
  if (state_->exterior) s += fmt::format(" outside B_{:.12g}", *state_->exterior);
  return s;
}

bool ShrinkerSurface::is_catalog_shrinker() const noexcept {
  const auto near = [](double a, double b) { return std::abs(a - b) <= 1e-12 * b; };
  if (std::holds_alternative<Plane>(state_->kind)) return true;
  if (const auto* s = std::get_if<RoundSphere>(&state_->kind)) return near(s->radius, std::sqrt(2.0 * s->n));
  if (const auto* c = std::get_if<RoundCylinder>(&state_->kind)) return near(c->radius, std::sqrt(2.0 * c->k));
  return false;
}

std::size_t ShrinkerSurface::element_count() const noexcept {
  return state_->discrete ? state_->discrete->positions.size() : 0;
}

const DiscreteData& ShrinkerSurface::discrete() const {
  if (!state_->discrete) throw DomainError("analytic surface has no discrete elements");
  return *state_->discrete;
}

const Vec& ShrinkerSurface::element_position(std::size_t element) const {
  const auto& d = discrete();
  if (element >= d.positions.size()) throw DomainError(fmt::format("element {} out of range", element));
  return d.positions[element];
}

ShrinkerSurface ShrinkerSurface::with_exterior(double radius) const {
  return ShrinkerSurface(state_->kind, radius, state_->label);
}

ShrinkerSurface ShrinkerSurface::with_label(std::string label) const {
  auto st = std::make_shared<State>(*state_);
  st->label = std::move(label);
  ShrinkerSurface out = *this;
  out.state_ = std::move(st);
  return out;
}

ShrinkerSurface make_plane(int n, int m, std::optional<double> exterior_radius) {
  if (n < 1 || m < 1) throw DomainError("plane needs n, m >= 1");
  return make_plane(Mat::Identity(n + m, n), exterior_radius);
}

ShrinkerSurface make_plane(Mat basis, std::optional<double> exterior_radius) {
  return ShrinkerSurface(Plane{std::move(basis)}, exterior_radius);
}

ShrinkerSurface make_sphere(int n, double radius) { return ShrinkerSurface(RoundSphere{n, radius}); }

ShrinkerSurface make_cylinder(int n, int k, double radius, std::optional<double> exterior_radius) {
  if (k < 1 || k >= n) throw DomainError("cylinder needs 1 <= k < n");
  // Sphere factor in the first k+1 coordinates, Euclidean factor in the rest.
  Mat axis = Mat::Zero(n + 1, n - k);
  for (int i = 0; i < n - k; ++i) axis(k + 1 + i, i) = 1.0;
  return ShrinkerSurface(RoundCylinder{n, k, radius, axis}, exterior_radius);
}

ShrinkerSurface make_graph_patch(GraphFunction graph) {
  return ShrinkerSurface(GraphPatch{std::make_shared<const GraphFunction>(std::move(graph))});
}

}  // namespace shrinkerlab::geom
