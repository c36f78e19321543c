#pragma once

#include "shrinkerlab/geom/graph_function.hpp"

#include <array>
#include <cstddef>
#include <vector>

namespace shrinkerlab::graphs {

using geom::GraphFunction;
using geom::GraphGrid;
using geom::Point2;

struct GraphResidual {
  std::vector<int> nodes;      ///< active nodes with a second-order stencil
  std::vector<double> field;   ///< m entries per listed node
  double sup = 0.0;            ///< over every listed node
  double interior_sup = 0.0;   ///< over nodes with centered stencils
  std::vector<int> skipped;    ///< stencil failures
};

/// g^{ij} u_ij - (-u + x.Du)/2 per node and component. Throws DomainError
/// naming the node when the induced metric is not positive definite.
GraphResidual graph_residual(const GraphFunction& u);

struct DecayConstants {
  std::array<double, 3> c{};       ///< max |D^j u^a| |x|^{j-1}, j = 0, 1, 2
  std::array<double, 3> radius{};  ///< |x| where each is attained
  double c_M = 0.0;                ///< max of the three
};

/// Smallest c with |D^j u^a(x)| <= c |x|^{1-j} over the active nodes (Frobenius
/// norm for j = 2). Needs an inner radius >= 1.
DecayConstants decay_constants(const GraphFunction& u);

struct SolveOptions {
  int max_iterations = 40;
  double tol = 1e-10;
};

struct SolveResult {
  GraphFunction u;
  std::vector<double> history;  ///< sup residual before each step
  int iterations = 0;
};

/// Damped Newton on the centred-difference graph equation. The unknowns are the
/// interior nodes; the remaining active nodes carry the boundary data. Throws
/// ConvergenceError with the history when the residual stays above tol.
SolveResult solve_graph_shrinker(const GraphGrid& grid, int m, const GraphFunction::Field& boundary,
                                 const GraphFunction::Field& initial, const SolveOptions& options = {});

struct HeatCheckSpec {
  std::vector<double> times{0.5, 1.0, 2.0, 4.0};
  double shrinker_tol = 1e-8;  ///< interior residual accepted as a shrinker graph
  double fd_scale = 0.25;      ///< spatial step h sqrt(t) and time step h t, times this
  double rel_tol = 1e-12;      ///< slack on the inequality
};

struct HeatNode {
  double t = 0.0;
  int node = 0;  ///< grid node y of u; x = sqrt(t) y
  int alpha = 0;
  double identity = 0.0;  ///< |Q| = |t^{-1/2} (delta - g^{-1}) u_ij| at y
  double fd = 0.0;        ///< |dU/dt + Laplacian U| by differences of U
  double bound = 0.0;     ///< (c2/|x|) sum_b |grad U^b|
};

struct HeatCheck {
  std::vector<HeatNode> nodes;
  std::size_t violations = 0;
  double c1 = 0.0;    ///< 2 sup_y sum_b |Du^b|: bounds |delta - g^{-1}| by c1 sum_b |Du^b|
  double c_M = 0.0;   ///< max decay constant
  double c2 = 0.0;    ///< c1 c_M
  bool neumann_regime = true;  ///< sup sum_b |Du^b| < 1/2
  double max_gap = 0.0;        ///< max |identity - fd|
  double min_margin = 0.0;     ///< min of bound - identity
};

/// Checks |dU/dt + Laplacian U| <= (c2/|x|) sum |grad U| for U(x,t) = sqrt(t) u(x/sqrt(t))
/// at x = sqrt(t) y over interior nodes y whose difference stencils stay inside
/// the interpolation range. Throws PreconditionError when u is not a shrinker graph
/// and DomainError when no node fits.
HeatCheck rescaled_heat_check(const GraphFunction& u, const HeatCheckSpec& spec = {});

struct LinearFit {
  Eigen::MatrixXd A;       ///< m x 2
  double max_deviation = 0.0;
};

/// Least-squares linear map u ~ A x over the active nodes.
LinearFit linear_fit(const GraphFunction& u);

}  // namespace shrinkerlab::graphs
