#pragma once

#include "shrinkerlab/numerics.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace shrinkerlab::functionals {

/// Degree-zero homogeneous function phi(X) = phi(X/|X|). `gradient` returns the
/// partials d phi / d xi_j of the polynomial extension, whose pointwise norm is
/// bounded by norm1.
class HomogeneousTestFunction {
 public:
  using Value = std::function<double(const Vec&)>;
  using Gradient = std::function<Vec(const Vec&)>;

  HomogeneousTestFunction(std::string id, Value value, Gradient gradient, double norm0, double norm1);

  const std::string& id() const noexcept { return id_; }
  double operator()(const Vec& xi) const { return value_(xi); }
  Vec gradient(const Vec& xi) const { return gradient_(xi); }
  /// phi(X / |X|); the caller guarantees X != 0.
  double at(const Vec& X) const { return value_(X / X.norm()); }
  /// Ambient gradient (I - xi xi^T) d_xi phi / |X|.
  Vec ambient_gradient(const Vec& X) const;
  double norm0() const noexcept { return norm0_; }
  double norm1() const noexcept { return norm1_; }

  static HomogeneousTestFunction constant();
  static HomogeneousTestFunction coordinate(int j);          ///< xi_j (0-based)
  static HomogeneousTestFunction coordinate_squared(int j);  ///< xi_j^2
  static HomogeneousTestFunction product(int i, int j);      ///< xi_i xi_j, i != j

 private:
  std::string id_;
  Value value_;
  Gradient gradient_;
  double norm0_;
  double norm1_;
};

/// Constant, every xi_j, every xi_j^2 and every xi_i xi_j (i < j) in R^dim.
std::vector<HomogeneousTestFunction> bundled_test_functions(int ambient_dim);

/// Looks up "one", "xi<j>", "xi<j>^2" or "xi<i>*xi<j>" (1-based indices).
HomogeneousTestFunction test_function_by_id(const std::string& id, int ambient_dim);

struct GradientBoundCheck {
  double worst_ratio = 0.0;  ///< max |grad phi(X)| |X| / |phi|_1 over the samples
  std::size_t samples = 0;
  bool holds = true;
};

/// Samples random X in R^dim and checks |grad phi(X)| <= |phi|_1 / |X|.
GradientBoundCheck check_gradient_bound(const HomogeneousTestFunction& phi, int ambient_dim,
                                        std::size_t samples, std::uint64_t seed);

}  // namespace shrinkerlab::functionals
