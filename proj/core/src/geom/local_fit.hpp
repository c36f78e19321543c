#pragma once

#include "shrinkerlab/numerics.hpp"

#include <optional>
#include <span>
#include <vector>

namespace shrinkerlab::geom::detail {

/// Quartic jet of the embedding X and of f = |X|^2 over a local chart.
struct Jet {
  Mat d1;               ///< ambient x n
  std::vector<Vec> d2;  ///< n*n second derivatives
  Vec f_grad;           ///< n
  Mat f_hess;           ///< n x n
};

/// Least-squares quartic fit of the points over coordinates chart^T (p - center).
/// Returns nullopt when the design matrix is rank deficient.
std::optional<Jet> fit_jet(const Vec& center, std::span<const Vec> points, const Mat& chart);

/// Top-n principal directions of the offsets (p - center), orthonormal columns.
Mat principal_chart(const Vec& center, std::span<const Vec> points, int n);

}  // namespace shrinkerlab::geom::detail
