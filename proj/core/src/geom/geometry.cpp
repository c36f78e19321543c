#include "shrinkerlab/geom/geometry.hpp"

#include "analytic.hpp"
#include "shrinkerlab/errors.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <map>

namespace shrinkerlab::geom {

GeometrySample sample_element(const ShrinkerSurface& surface, std::size_t element) {
  const auto& d = surface.discrete();
  if (element >= d.samples.size()) throw DomainError(fmt::format("element {} out of range", element));
  if (!d.samples[element]) throw FitError(fmt::format("element {}", element), d.fit_errors[element]);
  return *d.samples[element];
}

GeometrySample sample_at(const ShrinkerSurface& surface, const Vec& X) {
  const auto frame = detail::analytic_frame(surface);
  if (!frame) throw DomainError("sample_at needs an analytic surface; use sample_element");
  if (X.size() != surface.ambient_dim()) throw DomainError("point has the wrong ambient dimension");
  const double tol = 1e-9 * std::max(1.0, X.norm());
  if (X.norm() < frame->exterior - tol) throw DomainError("point lies inside the excised ball");
  const Vec z = frame->d > 0 ? Vec(frame->E.transpose() * X) : Vec();
  const Vec w = frame->d > 0 ? Vec(X - frame->E * z) : X;
  Vec omega;
  if (frame->has_sphere) {
    if (std::abs(w.norm() - frame->rho) > tol) throw DomainError("point is not on the surface");
    omega = frame->S.transpose() * w / w.norm();
  } else if (w.norm() > tol) {
    throw DomainError("point is not on the plane");
  }
  return detail::analytic_sample(*frame, omega, z);
}

ResidualNorms shrinker_residual(const ShrinkerSurface& surface, const QuadratureSpec& quad) {
  if (const auto frame = detail::analytic_frame(surface)) {
    const double sup = frame->has_sphere ? frame->rho * std::abs(0.5 - frame->k / (frame->rho * frame->rho)) : 0.0;
    const double rho_max = quad.rho_max > 0.0 ? quad.rho_max : default_truncation_radius(surface.dim(), 1.0, quad.tol);
    const double gauss_mass =
        integrate(surface, [](const GeometrySample& s) { return std::exp(-0.25 * s.X.squaredNorm()); },
                  Region{0.0, rho_max, std::nullopt}, quad.tol, quad.max_depth)
            .value;
    if (!(gauss_mass > 0.0)) throw Error("shrinker residual: surface has no samples");
    return {sup, sup * std::sqrt(gaussian_normalisation(surface.dim(), 1.0) * gauss_mass)};
  }
  const auto& d = surface.discrete();
  ResidualNorms out;
  CompensatedSum l2;
  std::size_t used = 0;
  for (const auto& s : d.samples) {
    if (!s) continue;
    const double r = (s->H + 0.5 * s->XN).norm();
    out.sup = std::max(out.sup, r);
    l2 += s->weight * r * r * std::exp(-0.25 * s->X.squaredNorm());
    ++used;
  }
  if (used == 0) throw Error("shrinker residual: surface has no samples");
  out.l2 = std::sqrt(gaussian_normalisation(surface.dim(), 1.0) * l2.value());
  return out;
}

DriftResidual drift_identity_residual(const ShrinkerSurface& surface, double shrinker_tol) {
  const ResidualNorms res = shrinker_residual(surface);
  if (!(res.sup <= shrinker_tol))
    throw PreconditionError(fmt::format("surface is not a shrinker (residual {:.6g} > {:.3g})", res.sup, shrinker_tol),
                            res.sup);
  DriftResidual out;
  if (const auto frame = detail::analytic_frame(surface)) {
    const double v = frame->has_sphere ? frame->rho * frame->rho - 2.0 * frame->k : 0.0;
    out.field = {v};
    out.sup = std::abs(v);
    return out;
  }
  const auto& d = surface.discrete();
  const int n = surface.dim();
  out.field.assign(d.samples.size(), std::numeric_limits<double>::quiet_NaN());
  for (std::size_t e = 0; e < d.samples.size(); ++e) {
    if (!d.samples[e]) continue;
    out.field[e] = d.laplace_norm_sq[e] + d.samples[e]->XN.squaredNorm() - 2.0 * n;
    out.sup = std::max(out.sup, std::abs(out.field[e]));
  }
  return out;
}

Refinement refine(const ShrinkerSurface& surface) {
  const auto& kind = surface.kind();
  if (const auto* mesh = std::get_if<TriangleMesh>(&kind)) {
    TriangleMesh fine{mesh->vertices, {}, mesh->snap};
    std::map<std::pair<int, int>, int> mid;
    auto midpoint = [&](int a, int b) {
      const auto key = std::make_pair(std::min(a, b), std::max(a, b));
      if (auto it = mid.find(key); it != mid.end()) return it->second;
      Vec p = 0.5 * (mesh->vertices[a] + mesh->vertices[b]);
      if (mesh->snap) p = mesh->snap(p);
      fine.vertices.push_back(p);
      const int idx = static_cast<int>(fine.vertices.size()) - 1;
      mid.emplace(key, idx);
      return idx;
    };
    fine.faces.reserve(mesh->faces.size() * 4);
    for (const auto& f : mesh->faces) {
      const int ab = midpoint(f[0], f[1]);
      const int bc = midpoint(f[1], f[2]);
      const int ca = midpoint(f[2], f[0]);
      fine.faces.push_back({f[0], ab, ca});
      fine.faces.push_back({f[1], bc, ab});
      fine.faces.push_back({f[2], ca, bc});
      fine.faces.push_back({ab, bc, ca});
    }
    return {ShrinkerSurface(std::move(fine), std::nullopt, surface.label()), {}};
  }
  if (const auto* curve = std::get_if<PolylineCurve>(&kind)) {
    PolylineCurve fine{{}, curve->closed, curve->snap};
    const std::size_t nv = curve->vertices.size();
    for (std::size_t i = 0; i < nv; ++i) {
      fine.vertices.push_back(curve->vertices[i]);
      if (!curve->closed && i + 1 == nv) break;
      Vec p = 0.5 * (curve->vertices[i] + curve->vertices[(i + 1) % nv]);
      if (curve->snap) p = curve->snap(p);
      fine.vertices.push_back(p);
    }
    return {ShrinkerSurface(std::move(fine), std::nullopt, surface.label()), {}};
  }
  if (const auto* graph = std::get_if<GraphPatch>(&kind)) {
    return {ShrinkerSurface(GraphPatch{std::make_shared<const GraphFunction>(graph->graph->refined())},
                            std::nullopt, surface.label()),
            {}};
  }
  return {surface, "analytic surface returned unchanged"};
}

}  // namespace shrinkerlab::geom
