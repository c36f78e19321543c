#include "shrinkerlab/cones.hpp"

#include "../src/geom/analytic.hpp"
#include "shrinkerlab/errors.hpp"
#include "shrinkerlab/geom/geometry.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace shrinkerlab::cones {

using namespace geom;

ShrinkerSurface rescale(const ShrinkerSurface& surface, double t) {
  if (!(t > 0.0)) throw DomainError("rescale factor must be positive");
  const auto ext = surface.exterior_radius();
  const std::optional<double> new_ext = ext ? std::optional<double>(*ext / t) : std::nullopt;
  const double inv = 1.0 / t;
  return std::visit(
      [&](const auto& k) -> ShrinkerSurface {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, Plane>) {
          return ShrinkerSurface(k, new_ext, surface.label());
        } else if constexpr (std::is_same_v<T, RoundSphere>) {
          return ShrinkerSurface(RoundSphere{k.n, k.radius * inv}, new_ext, surface.label());
        } else if constexpr (std::is_same_v<T, RoundCylinder>) {
          return ShrinkerSurface(RoundCylinder{k.n, k.k, k.radius * inv, k.axis}, new_ext, surface.label());
        } else if constexpr (std::is_same_v<T, GraphPatch>) {
          const GraphFunction& g = *k.graph;
          GraphGrid grid = g.grid();
          grid.inner *= inv;
          grid.outer *= inv;
          grid.h *= inv;
          std::vector<double> values = g.values();
          for (double& v : values) v *= inv;
          GraphFunction scaled(grid, g.m(), std::move(values));
          if (g.source()) {
            auto src = g.source();
            scaled.set_source([src, t, inv](const Point2& x) -> Vec { return src(x * t) * inv; });
          }
          return ShrinkerSurface(GraphPatch{std::make_shared<const GraphFunction>(std::move(scaled))}, std::nullopt,
                                 surface.label());
        } else {
          T copy = k;
          for (Vec& v : copy.vertices) v *= inv;
          if (k.snap) {
            auto snap = k.snap;
            copy.snap = [snap, t, inv](const Vec& p) -> Vec { return snap(p * t) * inv; };
          }
          return ShrinkerSurface(std::move(copy), std::nullopt, surface.label());
        }
      },
      surface.kind());
}

RadialProfile radial_mass_profile(const ShrinkerSurface& surface, const HomogeneousTestFunction& phi,
                                  const std::vector<double>& radii, const QuadratureSpec& quad) {
  RadialProfile out;
  out.phi_id = phi.id();
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (!(radii[i] > 0.0) || (i > 0 && !(radii[i] > radii[i - 1])))
      throw DomainError("profile radii must be positive and ascending");
  }
  const double inner = min_radius(surface);
  double lo = INFINITY;
  double hi = -INFINITY;
  for (double r : radii) {
    ProfilePoint p;
    p.r = r;
    if (r <= inner) {
      p.skipped = true;
      out.points.push_back(p);
      continue;
    }
    const Integral I = integrate(
        surface,
        [&](const GeometrySample& s) {
          const double n = s.X.norm();
          return n < 1e-9 ? 0.0 : phi(s.X / n);
        },
        Region{0.0, r, std::nullopt}, quad.tol, quad.max_depth);
    p.value = I.value / std::pow(r, surface.dim());
    lo = std::min(lo, p.value);
    hi = std::max(hi, p.value);
    out.points.push_back(p);
  }
  out.spread = hi >= lo ? hi - lo : 0.0;
  return out;
}

namespace {

Vec random_unit(std::mt19937_64& rng, int dim) {
  std::normal_distribution<double> gauss;
  Vec v(dim);
  do {
    for (int i = 0; i < dim; ++i) v[i] = gauss(rng);
  } while (v.norm() < 1e-12);
  return v.normalized();
}

// Solves rho^2 + |u(rho theta)|^2 = R^2 for rho along direction theta by bisection.
std::optional<Vec> graph_point(const GraphFunction& g, double angle, double R) {
  const Point2 dir(std::cos(angle), std::sin(angle));
  const auto value = [&](double rho) {
    const auto jet = g.interpolate(rho * dir);
    return rho * rho + jet.value.squaredNorm() - R * R;
  };
  double lo = g.grid().inner;
  double hi = g.grid().outer;
  try {
    if (value(lo) > 0.0 || value(hi) < 0.0) return std::nullopt;
  } catch (const DomainError&) {
    // Interpolation stencils need a margin from the annulus edges.
    lo += 3.0 * g.grid().h;
    hi -= 3.0 * g.grid().h;
    if (!(hi > lo) || value(lo) > 0.0 || value(hi) < 0.0) return std::nullopt;
  }
  for (int it = 0; it < 200 && hi - lo > 1e-14 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (value(mid) > 0.0 ? hi : lo) = mid;
  }
  const double rho = 0.5 * (lo + hi);
  const auto jet = g.interpolate(rho * dir);
  Vec X(2 + g.m());
  X.head<2>() = rho * dir;
  X.tail(g.m()) = jet.value;
  return X;
}

}  // namespace

std::vector<Vec> cross_section_parameters(const ShrinkerSurface& surface, std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<Vec> out;
  out.reserve(count);
  const auto frame = detail::analytic_frame(surface);
  for (std::size_t i = 0; i < count; ++i) {
    if (frame) {
      // omega on S^k followed by eta on S^{d-1}.
      const int a = frame->has_sphere ? frame->k + 1 : 0;
      Vec p(a + frame->d);
      if (a > 0) p.head(a) = random_unit(rng, a);
      if (frame->d > 0) p.tail(frame->d) = random_unit(rng, frame->d);
      out.push_back(p);
    } else {
      std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
      Vec p(1);
      p[0] = angle(rng);
      out.push_back(p);
    }
  }
  return out;
}

std::vector<Vec> cross_section(const ShrinkerSurface& surface, double r, const std::vector<Vec>& params) {
  std::vector<Vec> out;
  if (r < min_radius(surface) - 1e-12 * r) return out;
  if (const auto frame = detail::analytic_frame(surface)) {
    const double rho0 = frame->has_sphere ? frame->rho : 0.0;
    const double s_sq = r * r - rho0 * rho0;
    if (frame->d == 0) {
      if (std::abs(r - frame->rho) > 1e-12 * r) return out;
    } else if (s_sq < 0.0) {
      return out;
    }
    const double s = std::sqrt(std::max(0.0, s_sq));
    const int a = frame->has_sphere ? frame->k + 1 : 0;
    for (const Vec& p : params) {
      Vec X = Vec::Zero(surface.ambient_dim());
      if (a > 0) X += frame->rho * (frame->S * p.head(a));
      if (frame->d > 0) X += s * (frame->E * p.tail(frame->d));
      out.push_back(X / r);
    }
    return out;
  }
  if (const auto* g = std::get_if<GraphPatch>(&surface.kind())) {
    for (const Vec& p : params)
      if (auto X = graph_point(*g->graph, p[0], r)) out.push_back(*X / r);
    return out;
  }
  // Meshes and curves: crossings of edges with the sphere.
  std::vector<std::pair<int, int>> edges;
  if (const auto* m = std::get_if<TriangleMesh>(&surface.kind())) {
    for (const auto& f : m->faces)
      for (int c = 0; c < 3; ++c) edges.emplace_back(std::min(f[c], f[(c + 1) % 3]), std::max(f[c], f[(c + 1) % 3]));
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  } else {
    const auto& c = std::get<PolylineCurve>(surface.kind());
    const int nv = static_cast<int>(c.vertices.size());
    for (int i = 0; i + 1 < nv || (c.closed && i < nv); ++i) edges.emplace_back(i, (i + 1) % nv);
  }
  const auto& pos = surface.discrete().positions;
  for (const auto& [a, b] : edges) {
    const double fa = pos[a].norm() - r;
    const double fb = pos[b].norm() - r;
    if ((fa < 0.0) == (fb < 0.0)) continue;
    const double lam = fa / (fa - fb);
    const Vec X = pos[a] + lam * (pos[b] - pos[a]);
    out.push_back(X / X.norm());
  }
  return out;
}

namespace {

double hausdorff(const std::vector<Vec>& A, const std::vector<Vec>& B) {
  const auto directed = [](const std::vector<Vec>& P, const std::vector<Vec>& Q) {
    double worst = 0.0;
    for (const Vec& p : P) {
      double best = INFINITY;
      for (const Vec& q : Q) best = std::min(best, (p - q).squaredNorm());
      worst = std::max(worst, best);
    }
    return std::sqrt(worst);
  };
  return std::max(directed(A, B), directed(B, A));
}

}  // namespace

ConeDeviation cone_deviation(const ShrinkerSurface& surface, double ta, double tb, double r, std::size_t count,
                             std::uint64_t seed) {
  if (!(ta > 0.0) || !(tb > 0.0) || !(r > 0.0)) throw DomainError("scales and radius must be positive");
  const auto params = cross_section_parameters(surface, count, seed);
  ConeDeviation out;
  // (M_t cap dB_r)/r equals (M cap dB_{rt})/(rt).
  out.section_a = cross_section(surface, r * ta, params);
  if (out.section_a.empty()) throw DomainError(fmt::format("cross-section at scale {} is empty", ta));
  out.section_b = cross_section(surface, r * tb, params);
  if (out.section_b.empty()) throw DomainError(fmt::format("cross-section at scale {} is empty", tb));
  out.deviation = hausdorff(out.section_a, out.section_b);
  return out;
}

XiLimitReport xi_limit_consistency(const ShrinkerSurface& surface, const HomogeneousTestFunction& phi,
                                   const std::vector<double>& scales, const QuadratureSpec& quad) {
  for (std::size_t i = 1; i < scales.size(); ++i)
    if (!(scales[i] > scales[i - 1])) throw DomainError("scale sequence must be ascending");
  XiLimitReport out;
  double lo = INFINITY;
  double hi = -INFINITY;
  for (double t : scales) {
    XiScalePoint p;
    p.scale = t;
    QuadratureSpec q1 = quad;
    QuadratureSpec q2 = quad;
    if (quad.rho_max > 0.0) q1.rho_max = quad.rho_max / t;
    p.xi_rescaled = functionals::eval_Xi(rescale(surface, t), phi, 1.0, q1).value;
    p.xi_direct = functionals::eval_Xi(surface, phi, t * t, q2).value;
    lo = std::min(lo, p.xi_rescaled);
    hi = std::max(hi, p.xi_rescaled);
    const double scale = std::max({std::abs(p.xi_direct), std::abs(p.xi_rescaled), 1e-300});
    out.identity_error = std::max(out.identity_error, std::abs(p.xi_rescaled - p.xi_direct) / scale);
    out.points.push_back(p);
  }
  out.spread = scales.empty() ? 0.0 : hi - lo;
  return out;
}

}  // namespace shrinkerlab::cones
