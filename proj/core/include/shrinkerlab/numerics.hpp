#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace shrinkerlab {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Neumaier-compensated accumulator. Summation order is the call order, so
/// reductions that traverse elements in a fixed order are bit-reproducible.
class CompensatedSum {
 public:
  void add(double x) noexcept {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  CompensatedSum& operator+=(double x) noexcept {
    add(x);
    return *this;
  }
  double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

struct Integral {
  double value = 0.0;
  double error = 0.0;

  Integral& operator+=(const Integral& o) noexcept {
    value += o.value;
    error += o.error;
    return *this;
  }
};

/// Adaptive 15-point Gauss-Kronrod on [a, b]; returns 0 for empty intervals.
Integral integrate_interval(const std::function<double(double)>& f, double a, double b,
                            double rel_tol, unsigned max_depth = 15);

/// Integral over the unit sphere S^j in R^{j+1}, nested adaptive quadrature
/// in hyperspherical angles. S^0 is the two-point set {+1, -1}.
Integral integrate_unit_sphere(int j, const std::function<double(const Vec&)>& f, double rel_tol);

/// Hausdorff measure of the unit sphere S^j.
double unit_sphere_area(int j);

/// Volume of the unit ball in R^d.
double unit_ball_volume(int d);

/// `count` points from lo to hi (inclusive) with constant ratio.
std::vector<double> geometric_grid(double lo, double hi, std::size_t count);

/// Observed order log(e_coarse / e_fine) / log(ratio).
double observed_order(double e_coarse, double e_fine, double ratio = 2.0);

/// Lagrange basis weights on nodes 0..n-1 (unit spacing) evaluated at xi,
/// together with first and second derivatives with respect to xi.
struct LagrangeWeights {
  std::vector<double> w0, w1, w2;
};
LagrangeWeights lagrange_weights(double xi, int n);

/// Gaussian normalisation (4*pi*t)^(-n/2).
double gaussian_normalisation(int n, double t);

/// Default truncation radius 2*sqrt(t*(n + 2*log(1/tol))).
double default_truncation_radius(int n, double t, double tol);

}  // namespace shrinkerlab
