#include "shrinkerlab/geom/sample.hpp"

#include "shrinkerlab/errors.hpp"

#include <Eigen/QR>

namespace shrinkerlab::geom {

namespace {

Mat inverse_metric(const Mat& d1) {
  const Mat g = d1.transpose() * d1;
  Eigen::LDLT<Mat> ldlt(g);
  if (ldlt.info() != Eigen::Success || !(ldlt.vectorD().minCoeff() > 0.0))
    throw DomainError("induced metric is not positive definite");
  return ldlt.solve(Mat::Identity(g.rows(), g.cols()));
}

}  // namespace

GeometrySample geometry_from_jet(const Vec& X, const Mat& d1, std::span<const Vec> d2,
                                 double weight) {
  const auto n = d1.cols();
  const Mat ginv = inverse_metric(d1);

  Eigen::HouseholderQR<Mat> qr(d1);
  GeometrySample s;
  s.X = X;
  s.tangent = qr.householderQ() * Mat::Identity(d1.rows(), n);
  s.XT = s.tangent * (s.tangent.transpose() * X);
  s.XN = X - s.XT;

  std::vector<Vec> B(static_cast<std::size_t>(n * n));
  for (Eigen::Index k = 0; k < n * n; ++k) {
    const Vec& x = d2[static_cast<std::size_t>(k)];
    B[static_cast<std::size_t>(k)] = x - s.tangent * (s.tangent.transpose() * x);
  }
  s.H = Vec::Zero(X.size());
  double norm_sq = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      s.H += ginv(i, j) * B[static_cast<std::size_t>(i * n + j)];
      for (Eigen::Index k = 0; k < n; ++k)
        for (Eigen::Index l = 0; l < n; ++l)
          norm_sq += ginv(i, k) * ginv(j, l) *
                     B[static_cast<std::size_t>(i * n + j)].dot(B[static_cast<std::size_t>(k * n + l)]);
    }
  }
  s.B_norm = std::sqrt(std::max(norm_sq, 0.0));
  s.weight = weight;
  return s;
}

double laplace_beltrami_from_jet(const Mat& d1, std::span<const Vec> d2, const Vec& f_grad,
                                 const Mat& f_hess) {
  const auto n = d1.cols();
  const Mat ginv = inverse_metric(d1);
  // Christoffel symbols contracted with df: Gamma^k_ij f_k = g^{kl} <X_ij, X_l> f_k.
  const Vec df_up = ginv * f_grad;
  double out = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const Vec& xij = d2[static_cast<std::size_t>(i * n + j)];
      const double gamma_f = (d1.transpose() * xij).dot(df_up);
      out += ginv(i, j) * (f_hess(i, j) - gamma_f);
    }
  }
  return out;
}

}  // namespace shrinkerlab::geom
