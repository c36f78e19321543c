#include "local_fit.hpp"

#include <Eigen/QR>
#include <Eigen/SVD>

namespace shrinkerlab::geom::detail {

namespace {

// Monomials up to degree 4 in n = 1 or 2 variables; the first six (n = 2) or
// three (n = 1) are 1, linear, quadratic in the order used below.
int monomial_count(int n) { return n == 1 ? 5 : 15; }

Eigen::RowVectorXd monomials(const Vec& y) {
  Eigen::RowVectorXd row(monomial_count(static_cast<int>(y.size())));
  const double a = y[0];
  if (y.size() == 1) {
    row << 1.0, a, a * a, a * a * a, a * a * a * a;
    return row;
  }
  const double b = y[1];
  row << 1.0, a, b, a * a, a * b, b * b, a * a * a, a * a * b, a * b * b, b * b * b, a * a * a * a,
      a * a * a * b, a * a * b * b, a * b * b * b, b * b * b * b;
  return row;
}

}  // namespace

Mat principal_chart(const Vec& center, std::span<const Vec> points, int n) {
  const Eigen::Index dim = center.size();
  Mat cov = Mat::Zero(dim, dim);
  for (const Vec& p : points) {
    const Vec d = p - center;
    cov.noalias() += d * d.transpose();
  }
  Eigen::SelfAdjointEigenSolver<Mat> es(cov);
  // Eigenvalues ascend; take the last n eigenvectors, largest first.
  Mat chart(dim, n);
  for (int i = 0; i < n; ++i) chart.col(i) = es.eigenvectors().col(dim - 1 - i);
  return chart;
}

std::optional<Jet> fit_jet(const Vec& center, std::span<const Vec> points, const Mat& chart) {
  const int n = static_cast<int>(chart.cols());
  const Eigen::Index dim = center.size();
  const int cols = monomial_count(n);
  const auto rows = static_cast<Eigen::Index>(points.size());
  if (rows < cols) return std::nullopt;

  double scale = 0.0;
  for (const Vec& p : points) scale = std::max(scale, (p - center).norm());
  if (!(scale > 0.0)) return std::nullopt;

  Mat design(rows, cols);
  Mat rhs(rows, dim + 1);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const Vec& p = points[static_cast<std::size_t>(r)];
    const Vec d = p - center;
    const Vec y = chart.transpose() * d / scale;
    design.row(r) = monomials(y);
    rhs.row(r).head(dim) = d.transpose();
    rhs(r, dim) = p.squaredNorm();
  }
  // Coordinates are scaled into the unit ball, so a small singular value ratio
  // means the neighbourhood does not determine the jet.
  Eigen::JacobiSVD<Mat> svd(design, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  if (!(sv[cols - 1] > 1e-7 * sv[0])) return std::nullopt;
  const Mat coef = svd.solve(rhs);

  Jet jet;
  const double s1 = 1.0 / scale;
  const double s2 = s1 * s1;
  jet.d1.resize(dim, n);
  jet.d2.assign(static_cast<std::size_t>(n * n), Vec::Zero(dim));
  jet.f_grad.resize(n);
  jet.f_hess.resize(n, n);
  if (n == 1) {
    jet.d1.col(0) = coef.row(1).head(dim).transpose() * s1;
    jet.d2[0] = 2.0 * coef.row(2).head(dim).transpose() * s2;
    jet.f_grad[0] = coef(1, dim) * s1;
    jet.f_hess(0, 0) = 2.0 * coef(2, dim) * s2;
  } else {
    jet.d1.col(0) = coef.row(1).head(dim).transpose() * s1;
    jet.d1.col(1) = coef.row(2).head(dim).transpose() * s1;
    jet.d2[0] = 2.0 * coef.row(3).head(dim).transpose() * s2;
    jet.d2[1] = coef.row(4).head(dim).transpose() * s2;
    jet.d2[2] = jet.d2[1];
    jet.d2[3] = 2.0 * coef.row(5).head(dim).transpose() * s2;
    jet.f_grad << coef(1, dim) * s1, coef(2, dim) * s1;
    jet.f_hess << 2.0 * coef(3, dim) * s2, coef(4, dim) * s2, coef(4, dim) * s2, 2.0 * coef(5, dim) * s2;
  }
  return jet;
}

}  // namespace shrinkerlab::geom::detail
