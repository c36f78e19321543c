#include "shrinkerlab/moment.hpp"

#include "shrinkerlab/errors.hpp"
#include "shrinkerlab/numerics.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace shrinkerlab::moment {

MomentFunction::MomentFunction(int n, double c3, std::vector<double> r, std::vector<double> V)
    : n_(n), c3_(c3), r_(std::move(r)), V_(std::move(V)) {
  if (n_ < 1) throw DomainError("moment function needs n >= 1");
  if (!(c3_ >= 0.0) || !std::isfinite(c3_)) throw DomainError("growth constant must be finite and nonnegative");
  if (r_.empty() || r_.size() != V_.size()) throw DomainError("moment table needs matching, nonempty columns");
  for (std::size_t i = 0; i < r_.size(); ++i) {
    if (!std::isfinite(r_[i]) || !std::isfinite(V_[i]) || r_[i] < 0.0 || V_[i] < 0.0)
      throw DomainError(fmt::format("moment table row {} is negative or not finite", i + 1));
    if (i > 0) {
      if (r_[i] < r_[i - 1]) throw DomainError(fmt::format("breakpoints decrease at row {}", i + 1));
      if (V_[i] < V_[i - 1]) throw DomainError(fmt::format("V decreases at row {}", i + 1));
      if (r_[i] == r_[i - 1] && i > 1 && r_[i - 2] == r_[i])
        throw DomainError(fmt::format("more than two rows share the radius at row {}", i + 1));
    }
    if (V_[i] > c3_ * std::pow(r_[i], n_) * (1.0 + 1e-12) + 1e-300)
      throw DomainError(fmt::format("growth bound V <= {} r^{} violated at r = {}", c3_, n_, r_[i]));
  }
  if (r_.front() == 0.0 && V_.front() != 0.0) throw DomainError("V(0) must be 0");
}

bool MomentFunction::has_jumps() const noexcept {
  for (std::size_t i = 1; i < r_.size(); ++i)
    if (r_[i] == r_[i - 1] && V_[i] != V_[i - 1]) return true;
  return false;
}

double MomentFunction::operator()(double r) const {
  if (r < 0.0 || r > r_.back()) throw DomainError(fmt::format("r = {} outside [0, {}]", r, r_.back()));
  if (r < r_.front()) return V_.front() * r / r_.front();
  // Last index with r_i <= r, so jumps are taken from the right.
  const auto it = std::upper_bound(r_.begin(), r_.end(), r);
  const std::size_t i = static_cast<std::size_t>(it - r_.begin()) - 1;
  if (i + 1 == r_.size()) return V_.back();
  const double lam = (r - r_[i]) / (r_[i + 1] - r_[i]);
  return V_[i] + lam * (V_[i + 1] - V_[i]);
}

MomentFunction MomentFunction::combine(double a, const MomentFunction& V1, double b, const MomentFunction& V2) {
  if (!(a >= 0.0) || !(b >= 0.0)) throw DomainError("combination weights must be nonnegative");
  if (V1.n() != V2.n()) throw DomainError("cannot combine moment functions of different n");
  if (V1.has_jumps() || V2.has_jumps()) throw DomainError("combination of tables with jumps is not supported");
  std::vector<double> r = V1.radii();
  r.insert(r.end(), V2.radii().begin(), V2.radii().end());
  std::sort(r.begin(), r.end());
  r.erase(std::unique(r.begin(), r.end()), r.end());
  const double last = std::min(V1.r_last(), V2.r_last());
  r.erase(std::upper_bound(r.begin(), r.end(), last), r.end());
  std::vector<double> V(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) V[i] = a * V1(r[i]) + b * V2(r[i]);
  return MomentFunction(V1.n(), a * V1.c3() + b * V2.c3(), std::move(r), std::move(V));
}

namespace {

std::vector<double> ratio_grid(double r_min, double r_max, double ratio) {
  if (!(r_min > 0.0) || !(r_max > r_min) || !(ratio > 1.0)) throw DomainError("bad moment grid parameters");
  const auto count = static_cast<std::size_t>(std::ceil(std::log(r_max / r_min) / std::log(ratio))) + 1;
  return geometric_grid(r_min, r_max, count);
}

}  // namespace

MomentFunction power_law(int n, double kappa, double r_min, double r_max, double ratio) {
  std::vector<double> r = ratio_grid(r_min, r_max, ratio);
  std::vector<double> V(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) V[i] = kappa * std::pow(r[i], n);
  return MomentFunction(n, kappa, std::move(r), std::move(V));
}

MomentFunction bump(int n, double r0, double height, double width, int sign, double r_min, double r_max,
                    double ratio) {
  if (sign != 1 && sign != -1) throw DomainError("bump sign must be +1 or -1");
  std::vector<double> r = ratio_grid(r_min, r_max, ratio);
  // Put the bump's edges and peak on the grid.
  for (double extra : {r0 - width, r0, r0 + width})
    if (extra > r_min && extra < r_max) r.push_back(extra);
  std::sort(r.begin(), r.end());
  r.erase(std::unique(r.begin(), r.end(), [](double x, double y) { return std::abs(x - y) < 1e-14 * y; }), r.end());
  std::vector<double> V(r.size());
  double c3 = 1.0;
  for (std::size_t i = 0; i < r.size(); ++i) {
    const double d = r[i] - r0;
    double b = 0.0;
    if (std::abs(d) < width) {
      const double c = std::cos(std::numbers::pi * d / (2.0 * width));
      b = sign * height * c * c;
    }
    V[i] = std::pow(r[i], n) + b;
    c3 = std::max(c3, V[i] / std::pow(r[i], n));
  }
  return MomentFunction(n, c3, std::move(r), std::move(V));
}

namespace {

// int_a^b e^{-r^2/4t} dr for 0 <= a <= b.
double gauss_segment(double a, double b, double t) {
  const double s = 2.0 * std::sqrt(t);
  const double x = a / s;
  const double y = b / s;
  const double diff = x > 0.5 ? std::erfc(x) - std::erfc(y) : std::erf(y) - std::erf(x);
  return 0.5 * std::sqrt(std::numbers::pi) * s * diff;
}

}  // namespace

Transform gaussian_transform(const MomentFunction& V, double t, double rel_tol) {
  if (!(t > 0.0) || !std::isfinite(t)) throw DomainError("gaussian_transform needs t > 0");
  const int n = V.n();
  const double norm = gaussian_normalisation(n, t);
  const double c3_transform = V.c3() * std::pow(std::numbers::pi, -0.5 * n) * std::tgamma(0.5 * n + 1.0);
  Transform out;
  const double x = V.r_last() * V.r_last() / (4.0 * t);
  out.tail_bound = c3_transform * boost::math::gamma_q(0.5 * n + 1.0, x);
  if (out.tail_bound > rel_tol * c3_transform) {
    // Radius where the bound falls below tolerance.
    const double xs = boost::math::gamma_q_inv(0.5 * n + 1.0, rel_tol);
    throw TruncationError(fmt::format("moment table ends at r = {}, too short for t = {}", V.r_last(), t),
                          2.0 * std::sqrt(t * xs));
  }
  const auto& r = V.radii();
  const auto& v = V.values();
  CompensatedSum sum;
  double ra = 0.0;
  double va = 0.0;
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (r[i] == ra) {
      sum += std::exp(-ra * ra / (4.0 * t)) * (v[i] - va);
    } else {
      sum += (v[i] - va) / (r[i] - ra) * gauss_segment(ra, r[i], t);
    }
    ra = r[i];
    va = v[i];
  }
  out.value = norm * sum.value();
  return out;
}

std::vector<double> default_time_grid() { return geometric_grid(1e-2, 1e2, 25); }

Constancy constancy_test(const MomentFunction& V, const std::vector<double>& times, double tol) {
  if (times.size() < 2) throw DomainError("constancy test needs at least two times");
  const auto [tmin, tmax] = std::minmax_element(times.begin(), times.end());
  if (!(*tmin > 0.0) || *tmax / *tmin < 100.0 * (1.0 - 1e-12))
    throw DomainError("constancy test needs a time grid spanning two decades");
  Constancy out;
  out.times = times;
  CompensatedSum mean;
  double lo = INFINITY;
  double hi = -INFINITY;
  for (double t : times) {
    const double T = gaussian_transform(V, t).value;
    out.values.push_back(T);
    mean += T / static_cast<double>(times.size());
    lo = std::min(lo, T);
    hi = std::max(hi, T);
  }
  const double m = mean.value();
  out.spread = m != 0.0 ? (hi - lo) / std::abs(m) : hi - lo;
  out.homogeneous = out.spread < tol;
  const int n = V.n();
  out.kappa1 = m * std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n + 1.0);
  return out;
}

namespace {

// log(1+s) - s - s^2/2 without cancellation for small s.
double laplace_phase(double s) {
  if (std::abs(s) < 1e-2) {
    double term = s * s;
    double acc = -term;  // -s^2 collects the two quadratic pieces
    double sign = 1.0;
    for (int j = 3; j <= 14; ++j) {
      term *= s;
      acc += sign * term / j;
      sign = -sign;
    }
    return acc;
  }
  return std::log1p(s) - s - 0.5 * s * s;
}

}  // namespace

LaplaceValue laplace_asymptotic_I(double p, double r0, double delta) {
  if (!(p >= 2.0)) throw DomainError("laplace_asymptotic_I needs p >= 2");
  if (!(r0 > 0.0) || !(delta > 0.0) || !(delta < 0.5 * r0)) throw DomainError("need 0 < delta < r0/2");
  if (!std::isfinite(p) || p > 1e300) throw DomainError(fmt::format("p = {} overflows", p));
  const double sp = std::sqrt(p);
  // e^{-u^2 (1 - 1/6)} is below 1e-300 past |u| = 29; the limits are clipped there.
  const double U = std::min(sp * delta / r0, 30.0);
  LaplaceValue out;
  out.p = p;
  const auto integral = [&](auto&& f) {
    return integrate_interval(f, -U, 0.0, 1e-14).value + integrate_interval(f, 0.0, U, 1e-14).value;
  };
  out.value = integral([&](double u) { return std::exp(p * laplace_phase(u / sp)); });
  out.lower = integral([&](double u) {
    return u < 0.0 ? std::exp(-u * u + 8.0 * u * u * u / (3.0 * sp)) : std::exp(-u * u);
  });
  out.upper = integral([&](double u) { return std::exp(-u * u + u * u * u / (3.0 * sp)); });
  if (!std::isfinite(out.value)) throw DomainError(fmt::format("laplace integral overflowed at p = {}", p));
  return out;
}

double focus_time(int k, double r0) {
  if (k < 0 || !(r0 > 0.0)) throw DomainError("focus_time needs k >= 0 and r0 > 0");
  return 2.0 * r0 * r0 / (2.0 * k + 1.0);
}

double Separation::value() const { return normalized * std::exp(log_scale); }

std::vector<Separation> moment_separation(const MomentFunction& V, double kappa1, const std::vector<int>& ks,
                                          double t) {
  if (!(t > 0.0)) throw DomainError("moment_separation needs t > 0");
  const int n = V.n();
  const auto& r = V.radii();
  boost::math::quadrature::gauss<double, 20> gauss;
  std::vector<Separation> out;
  for (int k : ks) {
    if (k < 0) throw DomainError("moment orders must be nonnegative");
    const double q = 2.0 * k + 1.0;
    const double rs = std::sqrt(0.5 * q * t);
    const double sigma = rs / std::sqrt(2.0 * q);
    const double lo = std::max(0.0, rs - 14.0 * sigma);
    double hi = rs + 14.0 * sigma;
    const double ls = q * std::log(rs) - rs * rs / t;
    // Log-concave weight: past hi it has dropped by e^{-98} at least.
    if (hi > V.r_last()) {
      if (q * std::log(V.r_last()) - V.r_last() * V.r_last() / t - ls > -60.0)
        throw DomainError(fmt::format("moment weight for k = {}, t = {} extends past r = {}", k, t, V.r_last()));
      hi = V.r_last();
    }
    std::vector<double> cuts{lo};
    for (double b : r)
      if (b > lo && b < hi) cuts.push_back(b);
    cuts.push_back(hi);
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    CompensatedSum diff;
    CompensatedSum ref;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      const double a = cuts[i];
      const double b = cuts[i + 1];
      const int pieces = std::max(1, static_cast<int>(std::ceil((b - a) / (0.5 * sigma))));
      for (int j = 0; j < pieces; ++j) {
        const double pa = a + (b - a) * j / pieces;
        const double pb = a + (b - a) * (j + 1) / pieces;
        const auto weight = [&](double x) { return x > 0.0 ? std::exp(q * std::log(x) - x * x / t - ls) : 0.0; };
        // Values just inside the piece so jumps resolve to the correct side.
        const double mid = 0.5 * (pa + pb);
        diff += gauss.integrate(
            [&](double x) {
              const double xv = std::clamp(x, pa + 1e-15 * mid, pb - 1e-15 * mid);
              return (V(xv) - kappa1 * std::pow(xv, n)) * weight(x);
            },
            pa, pb);
        ref += gauss.integrate([&](double x) { return kappa1 * std::pow(x, n) * weight(x); }, pa, pb);
      }
    }
    Separation s;
    s.k = k;
    s.t = t;
    s.log_scale = ls;
    s.normalized = diff.value();
    s.relative = ref.value() != 0.0 ? diff.value() / ref.value() : diff.value();
    out.push_back(s);
  }
  return out;
}

}  // namespace shrinkerlab::moment
