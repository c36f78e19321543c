#include "shrinkerlab/regularity.hpp"

#include "shrinkerlab/cones.hpp"
#include "shrinkerlab/errors.hpp"
#include "shrinkerlab/geom/geometry.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace shrinkerlab::regularity {

using namespace geom;

double AnnulusCurvatureProfile::sup_from(double r) const {
  for (std::size_t i = 0; i < radii.size(); ++i)
    if (radii[i] >= r * (1.0 - 1e-12)) return running_sup[i];
  throw DomainError(fmt::format("profile has no annulus at or beyond r = {}", r));
}

bool AnnulusCurvatureProfile::decays() const {
  if (values.empty()) return true;
  const double first = values.front();
  const double last = values.back();
  if (running_sup.front() == 0.0) return true;
  if (last > first) return false;
  // Least-squares slope of log value against log r over the last half.
  const std::size_t start = values.size() / 2;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t count = 0;
  for (std::size_t i = start; i < values.size(); ++i) {
    if (!(values[i] > 0.0)) continue;
    const double x = std::log(radii[i]);
    const double y = std::log(values[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++count;
  }
  if (count < 2) return true;  // tail already vanished
  const double slope = (count * sxy - sx * sy) / (count * sxx - sx * sx);
  return slope <= -0.25;
}

AnnulusCurvatureProfile annulus_profile(const ShrinkerSurface& surface, double p, const std::vector<double>& radii,
                                        const QuadratureSpec& quad, bool mean_curvature) {
  const int n = surface.dim();
  if (mean_curvature) {
    if (!(p >= 2.0)) throw DomainError("|H|^p profiles need p >= 2");
  } else if (!(p >= n - 1e-12 && p <= n + 2 + 1e-12)) {
    throw DomainError(fmt::format("p = {} outside [n, n+2] for n = {}", p, n));
  }
  for (std::size_t i = 0; i < radii.size(); ++i)
    if (!(radii[i] > 0.0) || (i > 0 && !(radii[i] > radii[i - 1])))
      throw DomainError("annulus radii must be positive and ascending");
  AnnulusCurvatureProfile out;
  out.p = p;
  out.mean_curvature = mean_curvature;
  out.radii = radii;
  const double lo = min_radius(surface);
  const double hi = max_radius(surface);
  for (double r : radii) {
    if (2.0 * r < lo || r > hi) {
      out.values.push_back(0.0);
      out.notices.push_back(fmt::format("annulus [{}, {}] misses the surface", r, 2.0 * r));
      continue;
    }
    const Integral I = integrate(
        surface,
        [&](const GeometrySample& s) { return std::pow(mean_curvature ? s.H.norm() : s.B_norm, p); },
        Region{r, 2.0 * r, std::nullopt}, quad.tol, quad.max_depth);
    out.values.push_back(std::max(0.0, I.value));
  }
  out.running_sup.resize(out.values.size());
  double run = 0.0;
  for (std::size_t i = out.values.size(); i-- > 0;) {
    run = std::max(run, out.values[i]);
    out.running_sup[i] = run;
  }
  return out;
}

namespace {

void require_shrinker(const ShrinkerSurface& surface, const QuadratureSpec& quad) {
  const auto res = shrinker_residual(surface, quad);
  if (res.sup > quad.shrinker_tol)
    throw PreconditionError(fmt::format("surface is not a shrinker: residual {:.3g} above {:.3g}", res.sup,
                                        quad.shrinker_tol),
                            res.sup);
}

// Cumulative integral of f over a uniform grid in x = log r, with dr = r dx;
// piecewise quadratic through three neighbouring samples.
std::vector<double> cumulative(const std::vector<double>& f, double dx) {
  const std::size_t N = f.size();
  std::vector<double> C(N, 0.0);
  for (std::size_t i = 0; i + 1 < N; ++i) {
    double piece;
    if (N < 3) {
      piece = 0.5 * dx * (f[i] + f[i + 1]);
    } else if (i + 2 < N) {
      piece = dx * (5.0 * f[i] + 8.0 * f[i + 1] - f[i + 2]) / 12.0;
    } else {
      piece = dx * (-f[i - 1] + 8.0 * f[i] + 5.0 * f[i + 1]) / 12.0;
    }
    C[i + 1] = C[i] + piece;
  }
  return C;
}

}  // namespace

IValue eval_I(const ShrinkerSurface& surface, const Vec& X0, double t0, double p, const IGridSpec& grid,
              const QuadratureSpec& quad) {
  const int n = surface.dim();
  if (X0.size() != surface.ambient_dim()) throw DomainError("X0 has the wrong dimension");
  if (!(t0 >= -1.0 && t0 < 0.0)) throw DomainError("eval_I needs -1 <= t0 < 0");
  if (!(p >= n - 1e-12 && p <= n + 2 + 1e-12)) throw DomainError("eval_I needs p in [n, n+2]");
  if (grid.r_points < 3) throw DomainError("eval_I needs at least three r samples");
  require_shrinker(surface, quad);

  const double a = 0.5 * (n + 2 - p);
  const bool diagonal = std::abs(a - 1.0) < 1e-12;
  const double x_lo = std::log(0.5);
  const double x_hi = std::log(1.0 / std::sqrt(-t0));

  IValue out;
  out.specialized_range = t0 > -0.25;
  const auto J = [&](double r) {
    const Integral I = integrate(
        surface, [&](const GeometrySample& s) { return std::pow(s.B_norm, p); },
        Region{0.0, INFINITY, Ball{r * X0, 2.0 * r}}, quad.tol, quad.max_depth);
    return std::max(0.0, I.value);
  };

  std::vector<double> Jr;
  std::size_t N = grid.r_points;
  for (std::size_t level = 0; level <= grid.max_refinements; ++level) {
    const double dx = (x_hi - x_lo) / static_cast<double>(N - 1);
    std::vector<double> next(N);
    for (std::size_t i = 0; i < N; ++i) {
      if (level > 0 && i % 2 == 0) {
        next[i] = Jr[i / 2];
      } else {
        next[i] = J(std::exp(x_lo + dx * i));
      }
    }
    Jr = std::move(next);
    std::vector<double> f(N);
    for (std::size_t i = 0; i < N; ++i) {
      const double r = std::exp(x_lo + dx * i);
      f[i] = std::pow(r, p - n - 3) * Jr[i] * r;
    }
    const std::vector<double> C = cumulative(f, dx);
    double best = 0.0;
    double best_rho = 0.0;
    double best_rho_prime = 0.0;
    // rho' = 1/r_i and rho = 1/r_j with r_i < r_j.
    for (std::size_t i = 0; i < N; ++i) {
      const double rho_prime = std::exp(-(x_lo + dx * i));
      if (diagonal) {
        const double v = std::pow(rho_prime, n - p) * Jr[i];
        if (v > best) {
          best = v;
          best_rho = best_rho_prime = rho_prime;
        }
      }
      for (std::size_t j = i + 1; j < N; ++j) {
        const double rho = std::exp(-(x_lo + dx * j));
        const double v = 2.0 * std::pow(rho_prime * rho_prime - rho * rho, -a) * (C[j] - C[i]);
        if (v > best) {
          best = v;
          best_rho = rho;
          best_rho_prime = rho_prime;
        }
      }
    }
    out.history.push_back(best);
    out.value = best;
    out.rho = best_rho;
    out.rho_prime = best_rho_prime;
    out.r_points = N;
    if (level > 0) {
      const double prev = out.history[out.history.size() - 2];
      const double scale = std::max(std::abs(best), std::abs(prev));
      if (scale == 0.0 || std::abs(best - prev) <= grid.tol * scale) return out;
    }
    N = 2 * N - 1;
  }
  throw ConvergenceError(fmt::format("eval_I sup did not settle within {} refinements", grid.max_refinements),
                         out.history);
}

ChainBound chain_bound(const ShrinkerSurface& surface, const Vec& X0, double t0, double p, std::size_t samples,
                       const QuadratureSpec& quad) {
  const int n = surface.dim();
  if (!(p < n + 2)) throw DomainError("the chain bound needs p < n + 2");
  if (!(t0 >= -1.0 && t0 < 0.0)) throw DomainError("chain bound needs -1 <= t0 < 0");
  const double norm = X0.norm();
  if (!(norm > 2.0)) throw DomainError("chain bound needs |X0| > 2");
  ChainBound out;
  out.containment = norm >= 6.0;
  out.s_min = 0.5 * (norm - 2.0);
  out.s_max = (norm - 2.0) / std::sqrt(-t0);
  const auto profile = annulus_profile(surface, p, geometric_grid(out.s_min, out.s_max, std::max<std::size_t>(samples, 2)),
                                       quad);
  out.annulus_sup = profile.running_sup.front();
  out.bound = 2.0 / (2.0 + n - p) * out.annulus_sup;
  return out;
}

AlphaScan alpha_supremum(double alpha, double s_min, double s_max, std::size_t points) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw DomainError("alpha must lie in (0, 1]");
  if (!(s_min > 1.0) || !(s_max > s_min) || points < 2) throw DomainError("alpha scan needs 1 < s_min < s_max");
  AlphaScan out;
  out.alpha = alpha;
  out.s = geometric_grid(s_min, s_max, points);
  out.monotone = true;
  for (double s : out.s) {
    const double ls = std::log(s);
    // s^2 - 1 = (s - 1)(s + 1) keeps precision next to s = 1.
    const double num = std::expm1(2.0 * alpha * ls);
    const double den = std::exp(alpha * std::log((s - 1.0) * (s + 1.0)));
    const double v = num / den;
    if (!out.values.empty() && v < out.values.back() * (1.0 - 1e-12)) out.monotone = false;
    out.values.push_back(v);
  }
  out.scanned_max = *std::max_element(out.values.begin(), out.values.end());
  const std::size_t N = out.values.size();
  const double w1 = std::pow(out.s[N - 2], -2.0 * alpha);
  const double w2 = std::pow(out.s[N - 1], -2.0 * alpha);
  const double c = (out.values[N - 1] - out.values[N - 2]) / (w1 - w2);
  out.supremum = out.values[N - 1] + c * w2;
  return out;
}

namespace {

GeometrySample graph_sample_at(const GraphFunction& g, const Point2& x) {
  const auto jet = g.interpolate(x);
  const int m = g.m();
  Vec X(2 + m);
  X.head<2>() = x;
  X.tail(m) = jet.value;
  Mat d1 = Mat::Zero(2 + m, 2);
  d1(0, 0) = 1.0;
  d1(1, 1) = 1.0;
  d1.bottomRows(m) = jet.grad;
  std::vector<Vec> d2(4, Vec::Zero(2 + m));
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int al = 0; al < m; ++al) d2[2 * i + j][2 + al] = jet.hess[al](i, j);
  return geometry_from_jet(X, d1, d2, 1.0);
}

double slice_sup(const ShrinkerSurface& surface, double R) {
  if (surface.is_analytic()) {
    const auto params = cones::cross_section_parameters(surface, 64, 1);
    const auto pts = cones::cross_section(surface, R, params);
    if (pts.empty()) throw DomainError(fmt::format("M meets no sphere of radius {}", R));
    double best = 0.0;
    for (const Vec& xi : pts) best = std::max(best, sample_at(surface, R * xi).B_norm);
    return best;
  }
  if (const auto* g = std::get_if<GraphPatch>(&surface.kind())) {
    std::vector<Vec> params;
    for (int i = 0; i < 720; ++i) params.push_back(Vec::Constant(1, 2.0 * std::numbers::pi * i / 720.0));
    const auto pts = cones::cross_section(surface, R, params);
    if (pts.empty()) throw DomainError(fmt::format("graph meets no sphere of radius {}", R));
    double best = 0.0;
    for (const Vec& xi : pts) best = std::max(best, graph_sample_at(*g->graph, R * xi.head<2>()).B_norm);
    return best;
  }
  // Meshes and curves: elements within one local spacing of the sphere.
  const auto& d = surface.discrete();
  double best = -1.0;
  for (std::size_t e = 0; e < d.positions.size(); ++e) {
    if (!d.samples[e]) continue;
    const double spacing = surface.dim() == 1 ? d.weights[e] : std::sqrt(d.weights[e]);
    if (std::abs(d.positions[e].norm() - R) <= spacing) best = std::max(best, d.samples[e]->B_norm);
  }
  if (best < 0.0) throw DomainError(fmt::format("no element near the sphere of radius {}", R));
  return best;
}

}  // namespace

CurvatureEstimate curvature_estimate_ratio(const ShrinkerSurface& surface, double r, double t,
                                           const AnnulusCurvatureProfile& profile) {
  if (!(t > 4.0)) throw DomainError("curvature estimate needs t > 4");
  if (!(r > 0.0)) throw DomainError("curvature estimate needs r > 0");
  if (profile.mean_curvature) throw DomainError("curvature estimate needs a |B|^p profile");
  CurvatureEstimate out;
  out.r = r;
  out.t = t;
  out.lhs = slice_sup(surface, (r + 1.0) * t);
  out.rhs_core = std::pow(profile.sup_from(r), 1.0 / profile.p) / t;
  out.hypothesis_met = profile.decays();
  if (out.lhs == 0.0) {
    out.ratio = 0.0;
  } else {
    out.ratio = out.rhs_core > 0.0 ? out.lhs / out.rhs_core : INFINITY;
  }
  return out;
}

VolumeGrowthCurve volume_growth(const ShrinkerSurface& surface, double shift, const std::vector<double>& radii,
                                const QuadratureSpec& quad, double p) {
  if (!(shift >= 0.0 && shift < 1.0)) throw DomainError("volume growth shift must lie in [0, 1)");
  if (!(p >= 2.0)) throw DomainError("volume growth needs p >= 2");
  if (radii.empty()) throw DomainError("volume growth needs radii");
  for (std::size_t i = 0; i < radii.size(); ++i)
    if (!(radii[i] > 0.0) || (i > 0 && !(radii[i] > radii[i - 1])))
      throw DomainError("volume growth radii must be positive and ascending");
  const int n = surface.dim();
  VolumeGrowthCurve out;
  out.shift = shift;
  out.p = p;
  out.radii = radii;
  const auto area_in = [&](double r) {
    return integrate(surface, [](const GeometrySample&) { return 1.0; }, Region{0.0, r, std::nullopt}, quad.tol,
                     quad.max_depth)
        .value;
  };
  // Centered difference with a relative step, per radius.
  constexpr double eps = 1e-3;
  out.min_scaled_residual = INFINITY;
  for (double r : radii) {
    const double area = area_in(r);
    if (!(area > 0.0)) throw DomainError(fmt::format("the end is empty inside radius {}", r));
    const double hp = integrate(
                          surface, [&](const GeometrySample& s) { return std::pow(s.H.norm(), p); },
                          Region{0.0, r, std::nullopt}, quad.tol, quad.max_depth)
                          .value;
    const double V = std::pow(r, -n + shift) * area;
    const double rp = r * (1.0 + eps);
    const double rm = r * (1.0 - eps);
    const double dV = (std::pow(rp, -n + shift) * area_in(rp) - std::pow(rm, -n + shift) * area_in(rm)) / (rp - rm);
    const double ratio = std::pow(std::max(0.0, hp), 2.0 / p) * std::pow(area, -2.0 / p);
    const double res = dV - V / r * (shift - 2.0 * ratio);
    out.area.push_back(area);
    out.H_p.push_back(std::max(0.0, hp));
    out.V.push_back(V);
    out.residual.push_back(res);
    out.min_scaled_residual = std::min(out.min_scaled_residual, res * r / V);
  }
  out.H_profile = annulus_profile(surface, p, radii, quad, true);
  // Bounded annulus integrals: flagged when they grow along the tail.
  const auto& hv = out.H_profile.values;
  if (out.H_profile.running_sup.front() > 0.0) {
    const std::size_t start = hv.size() / 2;
    if (hv.back() > 0.0 && hv[start] > 0.0 && hv.back() > hv[start]) {
      const double slope = std::log(hv.back() / hv[start]) / std::log(radii.back() / radii[start]);
      out.hypothesis_met = slope <= 0.25;
    }
  }
  return out;
}

}  // namespace shrinkerlab::regularity
