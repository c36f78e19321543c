#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace shrinkerlab::moment {

/// Monotone mass function V(r) on [0, r_last]: piecewise linear through the
/// breakpoints, with V(0) = 0 and linear growth from the origin to the first
/// breakpoint. A repeated radius encodes a jump (point mass of dV).
class MomentFunction {
 public:
  /// Throws DomainError unless the table is monotone, starts at V(0) = 0 and
  /// satisfies V(r_i) <= c3 r_i^n.
  MomentFunction(int n, double c3, std::vector<double> r, std::vector<double> V);

  int n() const noexcept { return n_; }
  double c3() const noexcept { return c3_; }
  const std::vector<double>& radii() const noexcept { return r_; }
  const std::vector<double>& values() const noexcept { return V_; }
  double r_last() const noexcept { return r_.back(); }
  bool has_jumps() const noexcept;

  /// V(r) for 0 <= r <= r_last (right-continuous at jumps).
  double operator()(double r) const;

  /// a V1 + b V2 on the union of breakpoints (a, b >= 0, same n).
  static MomentFunction combine(double a, const MomentFunction& V1, double b, const MomentFunction& V2);

 private:
  int n_;
  double c3_;
  std::vector<double> r_;
  std::vector<double> V_;
};

/// kappa r^n sampled on a geometric grid from r_min to r_max with the given ratio.
MomentFunction power_law(int n, double kappa, double r_min, double r_max, double ratio);

/// r^n + sign * height * cos^2(pi (r - r0) / (2 width)) on |r - r0| < width,
/// on the same kind of grid. sign is +1 or -1.
MomentFunction bump(int n, double r0, double height, double width, int sign, double r_min, double r_max,
                    double ratio);

struct Transform {
  double value = 0.0;
  double tail_bound = 0.0;  ///< bound on the dropped part beyond r_last
};

/// (4 pi t)^{-n/2} int_0^inf e^{-r^2/4t} dV(r). The part beyond r_last is bounded
/// through V <= c3 r^n; TruncationError when that bound exceeds rel_tol times the
/// transform of c3 r^n.
Transform gaussian_transform(const MomentFunction& V, double t, double rel_tol = 1e-12);

/// 25 log-spaced times over [1e-2, 1e2].
std::vector<double> default_time_grid();

struct Constancy {
  bool homogeneous = false;
  double kappa1 = 0.0;  ///< V ~ kappa1 r^n, from the mean transform
  double spread = 0.0;  ///< (max - min) / |mean| over the grid
  std::vector<double> times;
  std::vector<double> values;
};

/// Throws DomainError when the grid spans less than two decades.
Constancy constancy_test(const MomentFunction& V, const std::vector<double>& times, double tol = 1e-6);

struct LaplaceValue {
  double p = 0.0;
  double value = 0.0;
  double lower = 0.0;  ///< integral with the cubic lower bound of log(1+s)
  double upper = 0.0;  ///< integral with the cubic upper bound of log(1+s)
};

/// (p^{1/2} e^{p/2} / r0^{p+1}) int_{r0-delta}^{r0+delta} r^p e^{-r^2/t_p} dr with
/// t_p = 2 r0^2 / p, computed as an integral in u = sqrt(p)(r/r0 - 1).
LaplaceValue laplace_asymptotic_I(double p, double r0 = 2.0, double delta = 0.5);

/// 2 r0^2 / (2k + 1): the time at which r^{2k+1} e^{-r^2/t} peaks at r0.
double focus_time(int k, double r0);

struct Separation {
  int k = 0;
  double t = 0.0;
  double normalized = 0.0;  ///< value * exp(-log_scale)
  double log_scale = 0.0;   ///< log of the peak of r^{2k+1} e^{-r^2/t}
  double relative = 0.0;    ///< value over int kappa1 r^n r^{2k+1} e^{-r^2/t} dr
  double value() const;
};

/// int_0^inf (V(r) - kappa1 r^n) r^{2k+1} e^{-r^2/t} dr for each k. Throws
/// DomainError when the weight is not negligible beyond r_last.
std::vector<Separation> moment_separation(const MomentFunction& V, double kappa1, const std::vector<int>& ks,
                                          double t);

}  // namespace shrinkerlab::moment
