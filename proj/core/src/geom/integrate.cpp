#include "shrinkerlab/geom/integrate.hpp"

#include "analytic.hpp"
#include "shrinkerlab/errors.hpp"

#include <Eigen/QR>
#include <fmt/format.h>

#include <algorithm>
#include <cmath>

namespace shrinkerlab::geom::detail {

std::optional<AnalyticFrame> analytic_frame(const ShrinkerSurface& surface) {
  AnalyticFrame f;
  f.exterior = surface.exterior_radius().value_or(0.0);
  const int N = surface.ambient_dim();
  if (const auto* p = std::get_if<Plane>(&surface.kind())) {
    f.E = p->basis;
    f.d = static_cast<int>(p->basis.cols());
    return f;
  }
  if (const auto* s = std::get_if<RoundSphere>(&surface.kind())) {
    f.has_sphere = true;
    f.k = s->n;
    f.rho = s->radius;
    f.S = Mat::Identity(N, N);
    f.E = Mat(N, 0);
    return f;
  }
  if (const auto* c = std::get_if<RoundCylinder>(&surface.kind())) {
    f.has_sphere = true;
    f.k = c->k;
    f.rho = c->radius;
    f.E = c->axis;
    f.d = static_cast<int>(c->axis.cols());
    Eigen::HouseholderQR<Mat> qr(c->axis);
    const Mat Q = qr.householderQ();
    f.S = Q.rightCols(N - f.d);
    return f;
  }
  return std::nullopt;
}

GeometrySample analytic_sample(const AnalyticFrame& f, const Vec& omega, const Vec& z) {
  GeometrySample s;
  const Eigen::Index N = f.has_sphere ? f.S.rows() : f.E.rows();
  const int n = f.d + (f.has_sphere ? f.k : 0);
  s.X = f.d > 0 ? Vec(f.E * z) : Vec::Zero(N);
  s.XT = s.X;
  s.tangent = Mat(N, n);
  if (f.d > 0) s.tangent.leftCols(f.d) = f.E;
  s.weight = 1.0;
  if (!f.has_sphere) {
    s.XN = Vec::Zero(N);
    s.H = Vec::Zero(N);
    s.B_norm = 0.0;
    return s;
  }
  const Vec normal = f.S * omega;
  s.XN = f.rho * normal;
  s.X += s.XN;
  s.H = -(f.k / f.rho) * normal;
  s.B_norm = std::sqrt(static_cast<double>(f.k)) / f.rho;
  Eigen::HouseholderQR<Mat> qr(omega);
  const Mat Q = qr.householderQ();
  s.tangent.rightCols(f.k) = f.S * Q.rightCols(f.k);
  return s;
}

}  // namespace shrinkerlab::geom::detail

namespace shrinkerlab::geom {

namespace {

using detail::AnalyticFrame;

bool in_region(const Vec& X, const Region& region) {
  const double r = X.norm();
  if (r < region.r_min || r > region.r_max) return false;
  if (region.ball && (X - region.ball->center).norm() > region.ball->radius) return false;
  return true;
}

// Range of the Euclidean-factor radius s for direction v at sphere point `base`.
std::pair<double, double> s_range(const AnalyticFrame& f, const Vec& base, const Vec& v,
                                  const Region& region) {
  const double r_lo = std::max(region.r_min, f.exterior);
  const double r_hi = region.r_max;
  const double rho0 = f.has_sphere ? f.rho : 0.0;
  const double lo_sq = r_lo * r_lo - rho0 * rho0;
  const double hi_sq = r_hi * r_hi - rho0 * rho0;
  if (hi_sq < 0.0) return {1.0, 0.0};
  double lo = std::sqrt(std::max(0.0, lo_sq));
  double hi = std::sqrt(hi_sq);
  if (region.ball) {
    const Vec a = base - region.ball->center;
    const double b = a.dot(v);
    const double disc = b * b - a.squaredNorm() + region.ball->radius * region.ball->radius;
    if (disc < 0.0) return {1.0, 0.0};
    lo = std::max(lo, -b - std::sqrt(disc));
    hi = std::min(hi, -b + std::sqrt(disc));
  }
  return {lo, hi};
}

Integral integrate_analytic(const AnalyticFrame& f, const Integrand& g, const Region& region,
                            double tol, unsigned depth) {
  const double jac_sphere = f.has_sphere ? std::pow(f.rho, f.k) : 1.0;
  const Eigen::Index N = f.has_sphere ? f.S.rows() : f.E.rows();

  auto over_euclidean = [&](const Vec& omega) -> Integral {
    const Vec base = f.has_sphere ? Vec(f.rho * (f.S * omega)) : Vec::Zero(N);
    if (f.d == 0) {
      const GeometrySample s = detail::analytic_sample(f, omega, Vec());
      if (!in_region(s.X, region) || s.X.norm() < f.exterior) return {};
      return {jac_sphere * g(s), 0.0};
    }
    double inner_err = 0.0;
    Integral out = integrate_unit_sphere(
        f.d - 1,
        [&](const Vec& eta) {
          const Vec v = f.E * eta;
          const auto [lo, hi] = s_range(f, base, v, region);
          if (!(hi > lo)) return 0.0;
          if (!std::isfinite(hi))
            throw DomainError("integration region is unbounded; set a finite outer radius");
          const Integral I = integrate_interval(
              [&](double s) {
                const GeometrySample smp = detail::analytic_sample(f, omega, s * eta);
                return g(smp) * std::pow(s, f.d - 1);
              },
              lo, hi, tol, depth);
          inner_err = std::max(inner_err, I.error);
          return I.value;
        },
        tol);
    out.error += unit_sphere_area(f.d - 1) * inner_err;
    out.value *= jac_sphere;
    out.error *= jac_sphere;
    return out;
  };

  if (!f.has_sphere) return over_euclidean(Vec());
  double inner_err = 0.0;
  Integral out = integrate_unit_sphere(
      f.k,
      [&](const Vec& omega) {
        const Integral I = over_euclidean(omega);
        inner_err = std::max(inner_err, I.error);
        return I.value;
      },
      tol);
  out.error += unit_sphere_area(f.k) * inner_err;
  return out;
}

}  // namespace

Integral integrate(const ShrinkerSurface& surface, const Integrand& f, const Region& region,
                   double tol, unsigned max_depth) {
  if (const auto frame = detail::analytic_frame(surface))
    return integrate_analytic(*frame, f, region, tol, max_depth);
  const auto& d = surface.discrete();
  CompensatedSum sum;
  for (std::size_t e = 0; e < d.positions.size(); ++e) {
    if (!in_region(d.positions[e], region)) continue;
    if (!d.samples[e]) throw FitError(fmt::format("element {}", e), d.fit_errors[e]);
    sum += d.samples[e]->weight * f(*d.samples[e]);
  }
  return {sum.value(), 0.0};
}

Integral integrate_boundary(const ShrinkerSurface& surface, const BoundaryIntegrand& g, double tol) {
  if (const auto frame = detail::analytic_frame(surface)) {
    const AnalyticFrame& f = *frame;
    if (f.exterior <= 0.0 || f.d == 0) return {};
    const double rho0 = f.has_sphere ? f.rho : 0.0;
    const double sb_sq = f.exterior * f.exterior - rho0 * rho0;
    if (!(sb_sq > 0.0)) return {};
    const double sb = std::sqrt(sb_sq);
    const double measure = (f.has_sphere ? std::pow(f.rho, f.k) : 1.0) * std::pow(sb, f.d - 1);
    auto over_eta = [&](const Vec& omega) {
      return integrate_unit_sphere(
          f.d - 1,
          [&](const Vec& eta) {
            const GeometrySample s = detail::analytic_sample(f, omega, sb * eta);
            const Vec nu = -(f.E * eta);
            return g(s, nu);
          },
          tol);
    };
    Integral out;
    if (!f.has_sphere) {
      out = over_eta(Vec());
    } else {
      out = integrate_unit_sphere(f.k, [&](const Vec& omega) { return over_eta(omega).value; }, tol);
    }
    out.value *= measure;
    out.error *= measure;
    return out;
  }
  const auto& d = surface.discrete();
  if (std::holds_alternative<GraphPatch>(surface.kind()))
    throw DomainError("boundary integrals are not available on graph patches");
  CompensatedSum sum;
  for (const auto& b : d.boundary) {
    const auto e = static_cast<std::size_t>(b.element);
    if (!d.samples[e]) throw FitError(fmt::format("element {}", e), d.fit_errors[e]);
    sum += b.measure * g(*d.samples[e], b.conormal);
  }
  return {sum.value(), 0.0};
}

double boundary_measure(const ShrinkerSurface& surface) {
  return integrate_boundary(surface, [](const GeometrySample&, const Vec&) { return 1.0; }, 1e-12).value;
}

double ball_volume(const ShrinkerSurface& surface, double r) {
  if (const auto frame = detail::analytic_frame(surface)) {
    const AnalyticFrame& f = *frame;
    const double R = f.exterior;
    if (!f.has_sphere) {
      const double n = f.d;
      return r > R ? unit_ball_volume(f.d) * (std::pow(r, n) - std::pow(R, n)) : 0.0;
    }
    if (f.d == 0) return (r >= f.rho && f.rho >= R) ? unit_sphere_area(f.k) * std::pow(f.rho, f.k) : 0.0;
    if (r <= f.rho) return 0.0;
    const double hi = std::sqrt(r * r - f.rho * f.rho);
    const double lo = std::sqrt(std::max(0.0, R * R - f.rho * f.rho));
    if (hi <= lo) return 0.0;
    return unit_sphere_area(f.k) * std::pow(f.rho, f.k) * unit_ball_volume(f.d) *
           (std::pow(hi, f.d) - std::pow(lo, f.d));
  }
  const auto& d = surface.discrete();
  CompensatedSum sum;
  for (std::size_t e = 0; e < d.positions.size(); ++e)
    if (d.positions[e].norm() <= r) sum += d.weights[e];
  return sum.value();
}

double min_radius(const ShrinkerSurface& surface) {
  if (const auto frame = detail::analytic_frame(surface))
    return std::max(frame->has_sphere ? frame->rho : 0.0, frame->exterior);
  double out = std::numeric_limits<double>::infinity();
  for (const Vec& x : surface.discrete().positions) out = std::min(out, x.norm());
  return out;
}

double max_radius(const ShrinkerSurface& surface) {
  if (const auto frame = detail::analytic_frame(surface))
    return frame->d == 0 ? frame->rho : std::numeric_limits<double>::infinity();
  double out = 0.0;
  for (const Vec& x : surface.discrete().positions) out = std::max(out, x.norm());
  return out;
}

double volume_growth_constant(const ShrinkerSurface& surface) {
  const double lo = std::max(min_radius(surface), 1e-3);
  double hi = max_radius(surface);
  if (!std::isfinite(hi)) hi = 1e3 * std::max(1.0, lo);
  hi = std::max(hi, lo * (1.0 + 1e-9));
  const int n = surface.dim();
  double best = 0.0;
  for (double r : geometric_grid(lo, hi, 241)) best = std::max(best, ball_volume(surface, r) / std::pow(r, n));
  if (!(best > 0.0)) throw Error("volume growth constant could not be measured (empty surface)");
  return best;
}

}  // namespace shrinkerlab::geom
