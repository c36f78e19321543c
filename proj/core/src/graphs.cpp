#include "shrinkerlab/graphs.hpp"

#include "shrinkerlab/errors.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <fmt/format.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>

namespace shrinkerlab::graphs {

namespace {

bool has_jet(const GraphFunction& u, int node) {
  for (int a = 0; a < u.m(); ++a)
    for (int i = 0; i < 2; ++i) {
      if (!std::isfinite(u.du(node, a, i))) return false;
      for (int j = 0; j < 2; ++j)
        if (!std::isfinite(u.d2u(node, a, i, j))) return false;
    }
  return true;
}

std::string node_name(const GraphGrid& grid, int node) {
  const Point2 x = grid.position(node);
  return fmt::format("node {} at ({:.6g}, {:.6g})", node, x[0], x[1]);
}

// g^{ij} u_ij - (-u + x.Du)/2 from a jet; T is double or complex<double>.
template <typename T>
void residual_from_jet(const Point2& x, int m, const T* u, const std::array<T, 2>* Du, const std::array<T, 3>* D2u, T* out) {
  T g00 = 1.0, g01 = 0.0, g11 = 1.0;
  for (int a = 0; a < m; ++a) {
    g00 += Du[a][0] * Du[a][0];
    g01 += Du[a][0] * Du[a][1];
    g11 += Du[a][1] * Du[a][1];
  }
  const T det = g00 * g11 - g01 * g01;
  const T i00 = g11 / det, i01 = -g01 / det, i11 = g00 / det;
  for (int a = 0; a < m; ++a) {
    const T lap = i00 * D2u[a][0] + 2.0 * i01 * D2u[a][1] + i11 * D2u[a][2];
    out[a] = lap - 0.5 * (-u[a] + x[0] * Du[a][0] + x[1] * Du[a][1]);
  }
}

double metric_det(const GraphFunction& u, int node) {
  double g00 = 1.0, g01 = 0.0, g11 = 1.0;
  for (int a = 0; a < u.m(); ++a) {
    g00 += u.du(node, a, 0) * u.du(node, a, 0);
    g01 += u.du(node, a, 0) * u.du(node, a, 1);
    g11 += u.du(node, a, 1) * u.du(node, a, 1);
  }
  return g00 * g11 - g01 * g01;
}

}  // namespace

GraphResidual graph_residual(const GraphFunction& u) {
  const int m = u.m();
  const GraphGrid& grid = u.grid();
  GraphResidual out;
  std::vector<double> val(m), res(m);
  std::vector<std::array<double, 2>> Du(m);
  std::vector<std::array<double, 3>> D2u(m);
  for (int node : u.active_nodes()) {
    if (!has_jet(u, node)) {
      out.skipped.push_back(node);
      continue;
    }
    const double det = metric_det(u, node);
    if (!(det > 0.0) || !std::isfinite(det))
      throw DomainError("induced metric is singular at " + node_name(grid, node));
    for (int a = 0; a < m; ++a) {
      val[a] = u.value(node, a);
      Du[a][0] = u.du(node, a, 0);
      Du[a][1] = u.du(node, a, 1);
      D2u[a][0] = u.d2u(node, a, 0, 0);
      D2u[a][1] = u.d2u(node, a, 0, 1);
      D2u[a][2] = u.d2u(node, a, 1, 1);
    }
    residual_from_jet(grid.position(node), m, val.data(), Du.data(), D2u.data(), res.data());
    out.nodes.push_back(node);
    const bool centred = u.interior(node);
    for (int a = 0; a < m; ++a) {
      out.field.push_back(res[a]);
      out.sup = std::max(out.sup, std::abs(res[a]));
      if (centred) out.interior_sup = std::max(out.interior_sup, std::abs(res[a]));
    }
  }
  return out;
}

DecayConstants decay_constants(const GraphFunction& u) {
  if (u.grid().inner < 1.0) throw DomainError("decay constants need an annulus inner radius >= 1");
  DecayConstants out;
  for (int node : u.active_nodes()) {
    const double r = u.grid().position(node).norm();
    if (!has_jet(u, node)) continue;
    for (int a = 0; a < u.m(); ++a) {
      const double g0 = u.du(node, a, 0);
      const double g1 = u.du(node, a, 1);
      const double h00 = u.d2u(node, a, 0, 0);
      const double h01 = u.d2u(node, a, 0, 1);
      const double h11 = u.d2u(node, a, 1, 1);
      const std::array<double, 3> v{std::abs(u.value(node, a)) / r, std::hypot(g0, g1),
                                    std::sqrt(h00 * h00 + 2.0 * h01 * h01 + h11 * h11) * r};
      for (int j = 0; j < 3; ++j) {
        if (v[j] > out.c[j]) {
          out.c[j] = v[j];
          out.radius[j] = r;
        }
      }
    }
  }
  out.c_M = *std::max_element(out.c.begin(), out.c.end());
  return out;
}

namespace {

using cplx = std::complex<double>;

// Centred residual at interior node (i, j) from the value array; T-valued copy
// of the 3x3 block lets one entry carry a complex perturbation.
template <typename T>
void centred_residual(const GraphGrid& grid, int m, int node, const std::vector<T>& vals, T* out) {
  const int i = grid.col(node);
  const int j = grid.row(node);
  const double h = grid.h;
  const auto at = [&](int di, int dj, int a) -> const T& {
    return vals[static_cast<std::size_t>(grid.index(i + di, j + dj)) * m + a];
  };
  std::vector<T> u(m);
  std::vector<std::array<T, 2>> Du(m);
  std::vector<std::array<T, 3>> D2u(m);
  for (int a = 0; a < m; ++a) {
    u[a] = at(0, 0, a);
    Du[a][0] = (at(1, 0, a) - at(-1, 0, a)) / (2.0 * h);
    Du[a][1] = (at(0, 1, a) - at(0, -1, a)) / (2.0 * h);
    D2u[a][0] = (at(1, 0, a) - 2.0 * at(0, 0, a) + at(-1, 0, a)) / (h * h);
    D2u[a][2] = (at(0, 1, a) - 2.0 * at(0, 0, a) + at(0, -1, a)) / (h * h);
    D2u[a][1] = (at(1, 1, a) - at(1, -1, a) - at(-1, 1, a) + at(-1, -1, a)) / (4.0 * h * h);
  }
  residual_from_jet(grid.position(node), m, u.data(), Du.data(), D2u.data(), out);
}

}  // namespace

SolveResult solve_graph_shrinker(const GraphGrid& grid, int m, const GraphFunction::Field& boundary,
                                 const GraphFunction::Field& initial, const SolveOptions& options) {
  if (m < 1) throw DomainError("graph solve needs m >= 1");
  // Node layout from a probe function on the same grid.
  const GraphFunction probe(grid, m, std::vector<double>(static_cast<std::size_t>(grid.node_count()) * m, 0.0));
  std::vector<int> unknown_of(grid.node_count(), -1);
  std::vector<int> unknowns;
  for (int node : probe.active_nodes()) {
    if (probe.interior(node)) {
      unknown_of[node] = static_cast<int>(unknowns.size());
      unknowns.push_back(node);
    }
  }
  if (unknowns.empty()) throw DomainError("graph solve grid has no interior nodes");

  std::vector<double> vals(static_cast<std::size_t>(grid.node_count()) * m, 0.0);
  for (int node : probe.active_nodes()) {
    const Vec v = unknown_of[node] >= 0 ? initial(grid.position(node)) : boundary(grid.position(node));
    if (v.size() != m) throw DomainError("graph solve field returned the wrong number of components");
    if (!v.allFinite()) throw DomainError("graph solve data is not finite at " + node_name(grid, node));
    for (int a = 0; a < m; ++a) vals[static_cast<std::size_t>(node) * m + a] = v[a];
  }

  const auto residual = [&](const std::vector<double>& v, Vec& R) {
    R.resize(static_cast<Eigen::Index>(unknowns.size()) * m);
    std::vector<double> out(m);
    for (std::size_t k = 0; k < unknowns.size(); ++k) {
      centred_residual(grid, m, unknowns[k], v, out.data());
      for (int a = 0; a < m; ++a) R[static_cast<Eigen::Index>(k) * m + a] = out[a];
    }
    return R.size() ? R.lpNorm<Eigen::Infinity>() : 0.0;
  };

  SolveResult result{GraphFunction(grid, m, vals), {}, 0};
  Vec R;
  double sup = residual(vals, R);
  const Eigen::Index dim = R.size();
  constexpr double step = 1e-30;
  for (int it = 0;; ++it) {
    result.history.push_back(sup);
    if (!std::isfinite(sup)) break;
    if (sup < options.tol) {
      result.u = GraphFunction(grid, m, vals);
      result.iterations = it;
      return result;
    }
    if (it >= options.max_iterations) break;
    // Complex-step Jacobian: column (k, a) touches the residuals of the 3x3 block around node k.
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(static_cast<std::size_t>(dim) * 9 * m);
    std::vector<cplx> cv(vals.begin(), vals.end());
    std::vector<cplx> out(m);
    for (std::size_t k = 0; k < unknowns.size(); ++k) {
      const int node = unknowns[k];
      const int ci = grid.col(node);
      const int cj = grid.row(node);
      for (int a = 0; a < m; ++a) {
        const std::size_t slot = static_cast<std::size_t>(node) * m + a;
        cv[slot] += cplx(0.0, step);
        for (int dj = -1; dj <= 1; ++dj) {
          for (int di = -1; di <= 1; ++di) {
            const int nb = grid.index(ci + di, cj + dj);
            const int row = unknown_of[nb];
            if (row < 0) continue;
            centred_residual(grid, m, nb, cv, out.data());
            for (int b = 0; b < m; ++b)
              if (out[b].imag() != 0.0)
                trip.emplace_back(row * m + b, static_cast<int>(k) * m + a, out[b].imag() / step);
          }
        }
        cv[slot] = vals[slot];
      }
    }
    Eigen::SparseMatrix<double> J(dim, dim);
    J.setFromTriplets(trip.begin(), trip.end());
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    lu.compute(J);
    if (lu.info() != Eigen::Success) break;
    const Vec delta = lu.solve(-R);
    if (lu.info() != Eigen::Success || !delta.allFinite()) break;
    // Halve the step until the sup residual drops.
    double lambda = 1.0;
    std::vector<double> trial(vals);
    Vec Rt;
    double sup_t = INFINITY;
    for (int halvings = 0; halvings < 12; ++halvings, lambda *= 0.5) {
      for (std::size_t k = 0; k < unknowns.size(); ++k)
        for (int a = 0; a < m; ++a)
          trial[static_cast<std::size_t>(unknowns[k]) * m + a] =
              vals[static_cast<std::size_t>(unknowns[k]) * m + a] + lambda * delta[static_cast<Eigen::Index>(k) * m + a];
      sup_t = residual(trial, Rt);
      if (sup_t < sup) break;
    }
    if (!(sup_t < sup)) {
      result.history.push_back(sup_t);
      break;
    }
    vals.swap(trial);
    R.swap(Rt);
    sup = sup_t;
  }
  throw ConvergenceError(fmt::format("graph Newton solve stalled at residual {:.3g}", result.history.back()),
                         result.history);
}

HeatCheck rescaled_heat_check(const GraphFunction& u, const HeatCheckSpec& spec) {
  const GraphResidual res = graph_residual(u);
  if (res.interior_sup > spec.shrinker_tol)
    throw PreconditionError(fmt::format("graph is not a shrinker: interior residual {:.3g} above {:.3g}",
                                        res.interior_sup, spec.shrinker_tol),
                            res.interior_sup);
  if (spec.times.empty()) throw DomainError("heat check needs at least one time");
  for (double t : spec.times)
    if (!(t > 0.0)) throw DomainError("heat check times must be positive");
  const GraphGrid& grid = u.grid();
  const int m = u.m();
  const double h = grid.h;

  HeatCheck out;
  double sup_S = 0.0;
  for (int node : u.active_nodes()) {
    if (!has_jet(u, node)) continue;
    double S = 0.0;
    for (int a = 0; a < m; ++a) S += std::hypot(u.du(node, a, 0), u.du(node, a, 1));
    sup_S = std::max(sup_S, S);
  }
  out.c1 = 2.0 * sup_S;
  out.neumann_regime = sup_S < 0.5;
  out.c_M = grid.inner >= 1.0 ? decay_constants(u).c_M : INFINITY;
  out.c2 = out.c1 * out.c_M;
  out.min_margin = INFINITY;

  const double lo = grid.inner + 3.0 * h;
  const double hi = grid.outer - 3.0 * h;
  for (double t : spec.times) {
    const double st = std::sqrt(t);
    const double dt = spec.fd_scale * h * t;
    const double dx = spec.fd_scale * h * st;
    const double shrink = std::sqrt(t / (t + dt));
    const double grow = std::sqrt(t / (t - dt));
    if (!(t - dt > 0.0)) throw DomainError("heat check time step exceeds t");
    for (int node : u.active_nodes()) {
      if (!u.interior(node)) continue;
      const Point2 y = grid.position(node);
      const double ry = y.norm();
      // Every difference point, mapped back to u's domain, stays inside [lo, hi].
      if (ry * shrink - spec.fd_scale * h < lo || ry * grow + spec.fd_scale * h > hi) continue;
      const Point2 x = st * y;
      const auto U = [&](const Point2& p, double s) { return Vec(std::sqrt(s) * u.interpolate(p / std::sqrt(s)).value); };
      const Vec U0 = U(x, t);
      const Vec Ut = (U(x, t + dt) - U(x, t - dt)) / (2.0 * dt);
      Vec lap = Vec::Zero(m);
      for (int i = 0; i < 2; ++i) {
        Point2 e = Point2::Zero();
        e[i] = dx;
        lap += (U(x + e, t) - 2.0 * U0 + U(x - e, t)) / (dx * dx);
      }
      double g00 = 1.0, g01 = 0.0, g11 = 1.0, S = 0.0;
      for (int a = 0; a < m; ++a) {
        const double u0 = u.du(node, a, 0), u1 = u.du(node, a, 1);
        g00 += u0 * u0;
        g01 += u0 * u1;
        g11 += u1 * u1;
        S += std::hypot(u0, u1);
      }
      const double det = g00 * g11 - g01 * g01;
      const double d00 = 1.0 - g11 / det, d01 = g01 / det, d11 = 1.0 - g00 / det;
      const double bound = out.c2 / x.norm() * S;
      for (int a = 0; a < m; ++a) {
        HeatNode hn;
        hn.t = t;
        hn.node = node;
        hn.alpha = a;
        const double Q = (d00 * u.d2u(node, a, 0, 0) + 2.0 * d01 * u.d2u(node, a, 0, 1) + d11 * u.d2u(node, a, 1, 1)) / st;
        hn.identity = std::abs(Q);
        hn.fd = std::abs(Ut[a] + lap[a]);
        hn.bound = bound;
        out.max_gap = std::max(out.max_gap, std::abs(Q - (Ut[a] + lap[a])));
        out.min_margin = std::min(out.min_margin, bound - hn.identity);
        if (hn.identity > bound * (1.0 + spec.rel_tol) + 1e-300) ++out.violations;
        out.nodes.push_back(hn);
      }
    }
  }
  if (out.nodes.empty()) throw DomainError("no grid node keeps its difference stencil inside the graph domain");
  return out;
}

LinearFit linear_fit(const GraphFunction& u) {
  const auto& nodes = u.active_nodes();
  if (nodes.empty()) throw DomainError("linear fit needs active nodes");
  Eigen::MatrixXd X(static_cast<Eigen::Index>(nodes.size()), 2);
  Eigen::MatrixXd Y(static_cast<Eigen::Index>(nodes.size()), u.m());
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    X.row(static_cast<Eigen::Index>(k)) = u.grid().position(nodes[k]).transpose();
    for (int a = 0; a < u.m(); ++a) Y(static_cast<Eigen::Index>(k), a) = u.value(nodes[k], a);
  }
  LinearFit out;
  out.A = X.colPivHouseholderQr().solve(Y).transpose();
  out.max_deviation = (X * out.A.transpose() - Y).cwiseAbs().maxCoeff();
  return out;
}

}  // namespace shrinkerlab::graphs
