#include "operations.hpp"

#include <shrinkerlab/cones.hpp>
#include <shrinkerlab/errors.hpp>
#include <shrinkerlab/functionals.hpp>
#include <shrinkerlab/geom/geometry.hpp>
#include <shrinkerlab/graphs.hpp>
#include <shrinkerlab/io.hpp>
#include <shrinkerlab/moment.hpp>
#include <shrinkerlab/monotonicity.hpp>
#include <shrinkerlab/regularity.hpp>

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace shrinkerlab::cli {

namespace {

using functionals::HomogeneousTestFunction;
using geom::QuadratureSpec;
using geom::ShrinkerSurface;

QuadratureSpec read_quad(Params& p) {
  QuadratureSpec q;
  q.tol = p.number("quad_tol", q.tol);
  q.rho_max = p.number("rho_max", q.rho_max);
  q.shrinker_tol = p.number("shrinker_tol", q.shrinker_tol);
  if (!(q.tol > 0.0)) p.fail("quad_tol", "must be positive");
  if (q.rho_max < 0.0) p.fail("rho_max", "must be nonnegative");
  if (!(q.shrinker_tol > 0.0)) p.fail("shrinker_tol", "must be positive");
  return q;
}

std::vector<double> positive_grid(Params& p, const std::string& key, std::optional<std::vector<double>> fallback = {}) {
  auto v = p.grid(key, std::move(fallback));
  for (double x : v)
    if (!(x > 0.0)) p.fail(key, "entries must be positive");
  return v;
}

std::vector<double> ascending(Params& p, const std::string& key, std::vector<double> v) {
  for (std::size_t i = 1; i < v.size(); ++i)
    if (!(v[i] > v[i - 1])) p.fail(key, "entries must be strictly ascending");
  return v;
}

std::vector<HomogeneousTestFunction> read_phis(Params& p, int ambient_dim) {
  if (!p.has("phi")) return functionals::bundled_test_functions(ambient_dim);
  std::vector<HomogeneousTestFunction> out;
  for (const auto& id : p.texts("phi")) {
    if (id == "all") {
      for (auto& f : functionals::bundled_test_functions(ambient_dim)) out.push_back(f);
      continue;
    }
    try {
      out.push_back(functionals::test_function_by_id(id, ambient_dim));
    } catch (const Error& e) {
      p.fail("phi", e.what());
    }
  }
  return out;
}

double max_of(const std::vector<double>& v) { return v.empty() ? 0.0 : *std::max_element(v.begin(), v.end()); }
double min_of(const std::vector<double>& v) { return v.empty() ? 0.0 : *std::min_element(v.begin(), v.end()); }

Vec read_point(Params& p, const std::string& key, int dim) {
  const auto v = p.numbers(key);
  if (static_cast<int>(v.size()) != dim) p.fail(key, fmt::format("expected {} coordinates", dim));
  return Eigen::Map<const Vec>(v.data(), dim);
}

// ---- functionals ----

Job prepare_F(Params& p, const Subject& s, const Context&) {
  const auto times = positive_grid(p, "times", std::vector<double>{1.0});
  const auto quad = read_quad(p);
  const auto surface = *s.surface;
  return [=](Report& r) {
    r.table.columns = {"t", "F", "error"};
    std::vector<double> F;
    for (double t : times) {
      const auto v = functionals::eval_F(surface, t, quad);
      r.table.add({t, v.value, v.error});
      F.push_back(v.value);
    }
    r.quantities = {{"F_min", min_of(F)}, {"F_max", max_of(F)}, {"F_spread", max_of(F) - min_of(F)}};
  };
}

Job prepare_F_prime(Params& p, const Subject& s, const Context&) {
  const auto times = positive_grid(p, "times", std::vector<double>{0.8, 1.0, 1.25});
  const double dt = p.number("fd_step", 1e-4);
  if (!(dt > 0.0)) p.fail("fd_step", "must be positive");
  for (double t : times)
    if (!(t > dt)) p.fail("times", "every time must exceed fd_step");
  const auto quad = read_quad(p);
  const auto surface = *s.surface;
  return [=](Report& r) {
    r.table.columns = {"t", "F_prime", "fd", "gap"};
    double gap = 0.0;
    double at_one = NAN;
    double lo = INFINITY, hi = -INFINITY;
    for (double t : times) {
      const double v = functionals::eval_F_prime(surface, t, quad).value;
      const double fd =
          (functionals::eval_F(surface, t + dt, quad).value - functionals::eval_F(surface, t - dt, quad).value) /
          (2.0 * dt);
      r.table.add({t, v, fd, std::abs(v - fd)});
      gap = std::max(gap, std::abs(v - fd));
      if (t == 1.0) at_one = v;
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    r.quantities = {{"max_fd_gap", gap}, {"abs_F_prime_at_1", std::abs(at_one)},
                    {"sign_change", lo < 0.0 && hi > 0.0 ? 1.0 : 0.0}};
  };
}

Job prepare_G(Params& p, const Subject& s, const Context&) {
  const auto times = positive_grid(p, "times", std::vector<double>{1.0, 2.0, 4.0});
  const auto quad = read_quad(p);
  const auto surface = *s.surface;
  return [=](Report& r) {
    r.table.columns = {"t", "G", "error"};
    std::vector<double> G;
    for (double t : times) {
      const auto v = functionals::eval_G(surface, t, quad);
      r.table.add({t, v.value, v.error});
      G.push_back(v.value);
    }
    r.quantities = {{"G_max", max_of(G)}, {"G_min", min_of(G)}};
  };
}

Job prepare_Xi(Params& p, const Subject& s, const Context&) {
  const auto times = positive_grid(p, "times", std::vector<double>{1.0});
  const auto phis = read_phis(p, s.surface->ambient_dim());
  const auto quad = read_quad(p);
  const auto surface = *s.surface;
  return [=](Report& r) {
    r.table.columns = {"phi", "t", "Xi", "error", "dropped"};
    double spread = 0.0;
    for (const auto& phi : phis) {
      std::vector<double> v;
      for (double t : times) {
        const auto x = functionals::eval_Xi(surface, phi, t, quad);
        r.table.add({phi.id(), t, x.value, x.error, static_cast<long long>(x.dropped)});
        v.push_back(x.value);
      }
      spread = std::max(spread, max_of(v) - min_of(v));
    }
    r.quantities = {{"max_spread", spread}};
  };
}

Job prepare_residual(Params& p, const Subject& s, const Context&) {
  const auto quad = read_quad(p);
  const auto surface = *s.surface;
  return [=](Report& r) {
    const auto res = geom::shrinker_residual(surface, quad);
    r.table.columns = {"sup", "l2"};
    r.table.add({res.sup, res.l2});
    r.quantities = {{"sup", res.sup}, {"l2", res.l2}};
  };
}

Job prepare_drift(Params& p, const Subject& s, const Context&) {
  const auto quad = read_quad(p);
  const double band = p.number("exclude_z_beyond", INFINITY);
  const auto surface = *s.surface;
  if (surface.is_analytic()) p.fail("surface", "the drift identity is measured on discrete surfaces");
  return [=](Report& r) {
    const auto d = geom::drift_identity_residual(surface, quad.shrinker_tol);
    r.table.columns = {"element", "x", "y", "z", "residual"};
    double sup = 0.0;
    for (std::size_t e = 0; e < d.field.size(); ++e) {
      const Vec& X = surface.element_position(e);
      const double z = X.size() > 2 ? X[2] : 0.0;
      if (std::isnan(d.field[e])) continue;
      r.table.add({static_cast<long long>(e), X[0], X.size() > 1 ? X[1] : 0.0, z, d.field[e]});
      if (std::abs(z) <= band) sup = std::max(sup, std::abs(d.field[e]));
    }
    r.quantities = {{"sup", sup}, {"sup_all", d.sup}};
  };
}

// ---- monotonicity ----

Job prepare_ledger(Params& p, const Subject& s, const Context&) {
  const double t1 = p.number("t1");
  const double t2 = p.number("t2");
  if (!(t1 > 0.0) || !(t2 > t1)) p.fail("t2", "need 0 < t1 < t2");
  const auto quad = read_quad(p);
  const auto surface = *s.surface;
  return [=](Report& r) {
    const auto L = monotonicity::verify_monotonicity(surface, t1, t2, quad);
    r.table.columns = {"t", "F"};
    for (std::size_t i = 0; i < L.t_grid.size(); ++i) r.table.add({L.t_grid[i], L.F[i]});
    r.quantities = {{"lhs", L.lhs},           {"boundary", L.boundary}, {"normal", L.normal},
                    {"defect", std::abs(L.defect)}, {"budget", L.budget}, {"pass", L.pass ? 1.0 : 0.0}};
    r.extra = {{"t1", t1}, {"t2", t2}, {"lhs_error", L.lhs_error}, {"boundary_error", L.boundary_error},
               {"normal_error", L.normal_error}};
  };
}

Job prepare_xi_bound(Params& p, const Subject& s, const Context&) {
  const auto times = positive_grid(p, "times", std::vector<double>{4.0, 16.0, 64.0});
  const auto phis = read_phis(p, s.surface->ambient_dim());
  const double delta = p.number("delta", 0.05);
  const auto quad = read_quad(p);
  const auto surface = *s.surface;
  return [=](Report& r) {
    r.table.columns = {"phi", "t", "numeric", "bound", "margin", "c1", "cR", "holds"};
    double margin = INFINITY;
    long long violations = 0;
    for (const auto& phi : phis) {
      for (double t : times) {
        const auto b = monotonicity::xi_derivative_bound(surface, phi, t, quad, delta);
        r.table.add({phi.id(), t, b.numeric, b.bound, b.margin, b.c1, b.cR, static_cast<long long>(b.holds)});
        margin = std::min(margin, b.margin);
        violations += b.holds ? 0 : 1;
      }
    }
    r.quantities = {{"min_margin", margin}, {"violations", static_cast<double>(violations)}};
  };
}

// ---- cones ----

Job prepare_profile(Params& p, const Subject& s, const Context&) {
  const auto radii = ascending(p, "radii", positive_grid(p, "radii", std::vector<double>{1, 2, 4, 8, 16}));
  const auto phis = read_phis(p, s.surface->ambient_dim());
  const auto quad = read_quad(p);
  const auto surface = *s.surface;
  return [=](Report& r) {
    r.table.columns = {"phi", "r", "value", "skipped"};
    double spread = 0.0;
    for (const auto& phi : phis) {
      const auto prof = cones::radial_mass_profile(surface, phi, radii, quad);
      for (const auto& pt : prof.points) r.table.add({phi.id(), pt.r, pt.value, static_cast<long long>(pt.skipped)});
      spread = std::max(spread, prof.spread);
    }
    r.quantities = {{"max_spread", spread}};
  };
}

Job prepare_deviation(Params& p, const Subject& s, const Context& ctx) {
  const auto scales = ascending(p, "scales", positive_grid(p, "scales", std::vector<double>{1, 2, 4, 8, 16}));
  const double radius = p.number("r", 1.0);
  const long long count = p.integer("samples", 256);
  if (!(radius > 0.0)) p.fail("r", "must be positive");
  if (count < 1) p.fail("samples", "must be positive");
  const bool export_points = p.flag("export_sections", false);
  const auto surface = *s.surface;
  const auto seed = ctx.seed;
  return [=](Report& r) {
    r.table.columns = {"t_a", "t_b", "deviation"};
    double worst = 0.0;
    double last = 0.0;
    Table cloud;
    cloud.columns = {"scale"};
    for (int i = 0; i < surface.ambient_dim(); ++i) cloud.columns.push_back(fmt::format("x{}", i + 1));
    const auto add_points = [&](double scale, const std::vector<Vec>& pts) {
      for (const auto& x : pts) {
        std::vector<Cell> row{scale};
        for (int i = 0; i < x.size(); ++i) row.emplace_back(x[i]);
        cloud.add(std::move(row));
      }
    };
    for (std::size_t i = 0; i + 1 < scales.size(); ++i) {
      const auto d = cones::cone_deviation(surface, scales[i], scales[i + 1], radius,
                                           static_cast<std::size_t>(count), seed);
      r.table.add({scales[i], scales[i + 1], d.deviation});
      worst = std::max(worst, d.deviation);
      last = d.deviation;
      if (i == 0) add_points(scales[i], d.section_a);
      add_points(scales[i + 1], d.section_b);
    }
    if (export_points) r.attachments.push_back({r.name + "-sections.csv", csv_body(cloud)});
    r.quantities = {{"max_deviation", worst}, {"last_deviation", last}};
  };
}

Job prepare_xi_limit(Params& p, const Subject& s, const Context&) {
  const auto scales = ascending(p, "scales", positive_grid(p, "scales", std::vector<double>{0.25, 1, 4, 16}));
  const auto phis = read_phis(p, s.surface->ambient_dim());
  const auto quad = read_quad(p);
  const auto surface = *s.surface;
  return [=](Report& r) {
    r.table.columns = {"phi", "scale", "xi_rescaled", "xi_direct"};
    double spread = 0.0, ident = 0.0;
    for (const auto& phi : phis) {
      const auto rep = cones::xi_limit_consistency(surface, phi, scales, quad);
      for (const auto& pt : rep.points) r.table.add({phi.id(), pt.scale, pt.xi_rescaled, pt.xi_direct});
      spread = std::max(spread, rep.spread);
      ident = std::max(ident, rep.identity_error);
    }
    r.quantities = {{"max_spread", spread}, {"identity_error", ident}};
  };
}

// ---- moment ----

Job prepare_transform(Params& p, const Subject& s, const Context&) {
  const auto times = positive_grid(p, "times", moment::default_time_grid());
  const double tol = p.number("rel_tol", 1e-12);
  const auto V = *s.moment;
  return [=](Report& r) {
    r.table.columns = {"t", "transform", "tail_bound"};
    std::vector<double> v;
    for (double t : times) {
      const auto T = moment::gaussian_transform(V, t, tol);
      r.table.add({t, T.value, T.tail_bound});
      v.push_back(T.value);
    }
    double mean = 0.0;
    for (double x : v) mean += x / static_cast<double>(v.size());
    r.quantities = {{"mean", mean}, {"spread", max_of(v) - min_of(v)}};
    if (V.has_jumps()) r.extra["notice"] = "table has jumps; the constancy argument assumes a continuous V";
  };
}

Job prepare_constancy(Params& p, const Subject& s, const Context&) {
  const auto times = positive_grid(p, "times", moment::default_time_grid());
  const double tol = p.number("tol", 1e-6);
  if (max_of(times) / min_of(times) < 100.0 * (1.0 - 1e-12)) p.fail("times", "grid must span two decades");
  const auto V = *s.moment;
  return [=](Report& r) {
    const auto c = moment::constancy_test(V, times, tol);
    r.table.columns = {"t", "transform"};
    for (std::size_t i = 0; i < c.times.size(); ++i) r.table.add({c.times[i], c.values[i]});
    r.quantities = {{"spread", c.spread}, {"kappa1", c.kappa1}, {"homogeneous", c.homogeneous ? 1.0 : 0.0}};
  };
}

Job prepare_separation(Params& p, const Subject& s, const Context&) {
  const auto ks = p.integers("k", std::vector<long long>{0, 10, 50, 200});
  for (auto k : ks)
    if (k < 0) p.fail("k", "orders must be nonnegative");
  const bool focus = !p.has("t");
  const double t = p.number("t", 1.0);
  const double r0 = p.number("r0", 2.0);
  if (!(t > 0.0)) p.fail("t", "must be positive");
  if (!(r0 > 0.0)) p.fail("r0", "must be positive");
  const std::optional<double> kappa = p.has("kappa1") ? std::optional<double>(p.number("kappa1")) : std::nullopt;
  const auto V = *s.moment;
  return [=](Report& r) {
    const double k1 = kappa ? *kappa : moment::constancy_test(V, moment::default_time_grid()).kappa1;
    r.table.columns = {"k", "t", "normalized", "relative", "log_scale"};
    std::vector<double> rel;
    for (auto k : ks) {
      const double tk = focus ? moment::focus_time(static_cast<int>(k), r0) : t;
      const auto sep = moment::moment_separation(V, k1, {static_cast<int>(k)}, tk).front();
      r.table.add({static_cast<long long>(k), tk, sep.normalized, sep.relative, sep.log_scale});
      rel.push_back(sep.relative);
    }
    r.quantities = {{"kappa1", k1}, {"min_relative", min_of(rel)}, {"max_relative", max_of(rel)},
                    {"last_relative", rel.back()}};
  };
}

Job prepare_laplace(Params& p, const Subject&, const Context&) {
  const auto ps = ascending(p, "p", p.numbers("p", std::vector<double>{1e2, 1e3, 1e4, 1e5, 1e6}));
  const double r0 = p.number("r0", 2.0);
  const double delta = p.number("delta", 0.5);
  for (double v : ps)
    if (!(v >= 2.0)) p.fail("p", "entries must be at least 2");
  if (!(r0 > 0.0) || !(delta > 0.0) || !(delta < 0.5 * r0)) p.fail("delta", "need 0 < delta < r0/2");
  return [=](Report& r) {
    r.table.columns = {"p", "I", "relative_error", "lower", "upper"};
    const double target = std::sqrt(M_PI);
    double prev = INFINITY;
    bool monotone = true;
    double last = 0.0;
    for (double pp : ps) {
      const auto L = moment::laplace_asymptotic_I(pp, r0, delta);
      const double err = std::abs(L.value / target - 1.0);
      r.table.add({pp, L.value, err, L.lower, L.upper});
      if (err > prev) monotone = false;
      prev = err;
      last = err;
    }
    r.quantities = {{"last_relative_error", last}, {"monotone", monotone ? 1.0 : 0.0}};
  };
}

// ---- regularity ----

Job prepare_annulus(Params& p, const Subject& s, const Context&) {
  const double pe = p.number("p", s.surface->dim());
  const auto radii = ascending(p, "radii", positive_grid(p, "radii", std::vector<double>{1, 2, 4, 8, 16}));
  const bool mean = p.flag("mean_curvature", false);
  const int n = s.surface->dim();
  if (!mean && !(pe >= n && pe <= n + 2)) p.fail("p", "must lie in [n, n+2]");
  const auto quad = read_quad(p);
  const auto surface = *s.surface;
  return [=](Report& r) {
    const auto prof = regularity::annulus_profile(surface, pe, radii, quad, mean);
    r.table.columns = {"r", "value", "running_sup"};
    for (std::size_t i = 0; i < prof.radii.size(); ++i)
      r.table.add({prof.radii[i], prof.values[i], prof.running_sup[i]});
    r.quantities = {{"sup", prof.running_sup.empty() ? 0.0 : prof.running_sup.front()},
                    {"decays", prof.decays() ? 1.0 : 0.0}};
    if (!prof.notices.empty()) r.extra["notices"] = prof.notices;
  };
}

Job prepare_eval_I(Params& p, const Subject& s, const Context&) {
  const int n = s.surface->dim();
  const Vec X0 = read_point(p, "X0", s.surface->ambient_dim());
  const double t0 = p.number("t0", -0.01);
  const double pe = p.number("p", n);
  regularity::IGridSpec g;
  g.r_points = static_cast<std::size_t>(p.integer("r_points", static_cast<long long>(g.r_points)));
  g.tol = p.number("grid_tol", g.tol);
  if (!(t0 >= -1.0 && t0 < 0.0)) p.fail("t0", "must lie in [-1, 0)");
  if (!(pe >= n && pe <= n + 2)) p.fail("p", "must lie in [n, n+2]");
  if (g.r_points < 3) p.fail("r_points", "need at least 3");
  const auto quad = read_quad(p);
  const auto surface = *s.surface;
  return [=](Report& r) {
    const auto I = regularity::eval_I(surface, X0, t0, pe, g, quad);
    r.table.columns = {"level", "r_points", "sup"};
    std::size_t N = g.r_points;
    for (std::size_t i = 0; i < I.history.size(); ++i, N = 2 * N - 1)
      r.table.add({static_cast<long long>(i), static_cast<long long>(N), I.history[i]});
    r.quantities = {{"I", I.value}};
    r.extra = {{"rho", I.rho}, {"rho_prime", I.rho_prime}, {"r_points", I.r_points},
               {"specialized_range", I.specialized_range}};
    if (pe < n + 2 && X0.norm() > 2.0) {
      const auto c = regularity::chain_bound(surface, X0, t0, pe, 33, quad);
      r.quantities.push_back({"chain_bound", c.bound});
      r.quantities.push_back({"chain_margin", c.bound - I.value});
      r.extra["containment"] = c.containment;
    } else {
      r.quantities.push_back({"chain_bound", NAN});
      r.quantities.push_back({"chain_margin", NAN});
    }
  };
}

Job prepare_alpha(Params& p, const Subject&, const Context&) {
  const auto alphas = p.numbers("alpha", std::vector<double>{0.25, 0.5, 1.0});
  const double s_max = p.number("s_max", 1e6);
  for (double a : alphas)
    if (!(a > 0.0 && a <= 1.0)) p.fail("alpha", "entries must lie in (0, 1]");
  if (!(s_max > 1.0 + 1e-6)) p.fail("s_max", "must exceed 1 + 1e-6");
  return [=](Report& r) {
    r.table.columns = {"alpha", "scanned_max", "supremum", "monotone"};
    double err = 0.0;
    bool mono = true;
    for (double a : alphas) {
      const auto sc = regularity::alpha_supremum(a, 1.0 + 1e-6, s_max);
      r.table.add({a, sc.scanned_max, sc.supremum, static_cast<long long>(sc.monotone)});
      err = std::max(err, std::abs(sc.supremum - 1.0));
      mono = mono && sc.monotone;
    }
    r.quantities = {{"max_error", err}, {"monotone", mono ? 1.0 : 0.0}};
  };
}

Job prepare_curvature_estimate(Params& p, const Subject& s, const Context&) {
  const int n = s.surface->dim();
  const double pe = p.number("p", n);
  const auto radii = ascending(p, "radii", positive_grid(p, "radii"));
  const auto rs = positive_grid(p, "r", std::vector<double>{radii.front()});
  const auto ts = p.numbers("t", std::vector<double>{5, 10, 20});
  for (double t : ts)
    if (!(t > 4.0)) p.fail("t", "entries must exceed 4");
  if (!(pe >= n && pe <= n + 2)) p.fail("p", "must lie in [n, n+2]");
  const auto quad = read_quad(p);
  const auto surface = *s.surface;
  return [=](Report& r) {
    const auto prof = regularity::annulus_profile(surface, pe, radii, quad);
    r.table.columns = {"r", "t", "lhs", "rhs_core", "ratio"};
    double worst = 0.0;
    for (double rr : rs)
      for (double t : ts) {
        const auto e = regularity::curvature_estimate_ratio(surface, rr, t, prof);
        r.table.add({rr, t, e.lhs, e.rhs_core, e.ratio});
        worst = std::max(worst, e.ratio);
      }
    r.quantities = {{"max_ratio", worst}, {"hypothesis_met", prof.decays() ? 1.0 : 0.0}};
  };
}

Job prepare_volume_growth(Params& p, const Subject& s, const Context&) {
  const double shift = p.number("shift", 0.0);
  const double pe = p.number("p", 2.0);
  const auto radii = ascending(p, "radii", positive_grid(p, "radii"));
  if (!(shift >= 0.0 && shift < 1.0)) p.fail("shift", "must lie in [0, 1)");
  if (!(pe >= 2.0)) p.fail("p", "must be at least 2");
  const auto quad = read_quad(p);
  const auto surface = *s.surface;
  return [=](Report& r) {
    const auto v = regularity::volume_growth(surface, shift, radii, quad, pe);
    r.table.columns = {"r", "area", "H_p", "V", "residual"};
    for (std::size_t i = 0; i < v.radii.size(); ++i)
      r.table.add({v.radii[i], v.area[i], v.H_p[i], v.V[i], v.residual[i]});
    const double slope = v.radii.size() > 1 ? std::log(v.V.back() / v.V.front()) /
                                                  std::log(v.radii.back() / v.radii.front())
                                            : 0.0;
    r.quantities = {{"V_last", v.V.back()},
                    {"min_scaled_residual", v.min_scaled_residual},
                    {"log_slope", slope},
                    {"hypothesis_met", v.hypothesis_met ? 1.0 : 0.0}};
  };
}

// ---- graphs ----

Job prepare_graph_residual(Params&, const Subject& s, const Context&) {
  const auto u = *s.graph;
  return [=](Report& r) {
    const auto res = graphs::graph_residual(u);
    r.table.columns = {"x", "y", "alpha", "residual"};
    for (std::size_t k = 0; k < res.nodes.size(); ++k) {
      const auto x = u.grid().position(res.nodes[k]);
      for (int a = 0; a < u.m(); ++a)
        r.table.add({x[0], x[1], static_cast<long long>(a + 1), res.field[k * u.m() + a]});
    }
    r.quantities = {{"sup", res.sup}, {"interior_sup", res.interior_sup}};
  };
}

Job prepare_decay(Params&, const Subject& s, const Context&) {
  const auto u = *s.graph;
  return [=](Report& r) {
    const auto d = graphs::decay_constants(u);
    r.table.columns = {"j", "c", "radius"};
    for (int j = 0; j < 3; ++j) r.table.add({static_cast<long long>(j), d.c[j], d.radius[j]});
    r.quantities = {{"c_M", d.c_M}, {"c0", d.c[0]}, {"c1", d.c[1]}, {"c2", d.c[2]}};
  };
}

Job prepare_solve(Params& p, const Subject&, const Context&) {
  const double inner = p.number("inner", 4.0);
  const double outer = p.number("outer", 16.0);
  const double h = p.number("h", 0.25);
  const auto A = p.numbers("linear", std::vector<double>{0.06, -0.08});
  const double amp = p.number("perturbation", 0.05);
  graphs::SolveOptions opt;
  opt.tol = p.number("tol", opt.tol);
  opt.max_iterations = static_cast<int>(p.integer("max_iterations", opt.max_iterations));
  const bool archive = p.flag("archive", true);
  if (!(inner >= 1.0) || !(outer > inner)) p.fail("outer", "need 1 <= inner < outer");
  if (!(h > 0.0) || h > 0.25 * (outer - inner)) p.fail("h", "must be positive and resolve the annulus");
  if (A.size() != 2) p.fail("linear", "expected two coefficients");
  if (!(opt.tol > 0.0)) p.fail("tol", "must be positive");
  return [=](Report& r) {
    const double scale = amp / (outer + 3.0 / outer);
    const auto linear = [=](const geom::Point2& x) { return Vec::Constant(1, A[0] * x[0] + A[1] * x[1]); };
    const auto data = [=](const geom::Point2& x) {
      const double rr = x.norm();
      const double c = (x[0] * x[0] - x[1] * x[1]) / (rr * rr);  // cos 2 theta
      return Vec::Constant(1, A[0] * x[0] + A[1] * x[1] + scale * (rr + 3.0 / rr) * c);
    };
    const auto sol = graphs::solve_graph_shrinker(geom::GraphGrid::over_annulus(inner, outer, h), 1, data, linear, opt);
    r.table.columns = {"iteration", "residual"};
    for (std::size_t i = 0; i < sol.history.size(); ++i) r.table.add({static_cast<long long>(i), sol.history[i]});
    const auto res = graphs::graph_residual(sol.u);
    const auto d = graphs::decay_constants(sol.u);
    r.quantities = {{"final_residual", res.interior_sup},
                    {"iterations", static_cast<double>(sol.iterations)},
                    {"c_M", d.c_M}};
    if (archive) {
      std::ostringstream os;
      io::write_graph_table(os, sol.u);
      r.attachments.push_back({r.name + ".graph", os.str()});
    }
  };
}

Job prepare_heat(Params& p, const Subject& s, const Context&) {
  graphs::HeatCheckSpec spec;
  spec.times = positive_grid(p, "times", spec.times);
  spec.shrinker_tol = p.number("shrinker_tol", spec.shrinker_tol);
  spec.fd_scale = p.number("fd_scale", spec.fd_scale);
  if (!(spec.fd_scale > 0.0) || spec.fd_scale > 1.0) p.fail("fd_scale", "must lie in (0, 1]");
  const auto u = *s.graph;
  return [=](Report& r) {
    const auto H = graphs::rescaled_heat_check(u, spec);
    r.table.columns = {"t", "nodes", "violations", "max_identity", "max_fd", "max_gap", "min_margin"};
    for (double t : spec.times) {
      long long nodes = 0, viol = 0;
      double mi = 0, mf = 0, gap = 0, margin = INFINITY;
      for (const auto& hn : H.nodes) {
        if (hn.t != t) continue;
        ++nodes;
        viol += hn.identity > hn.bound * (1.0 + spec.rel_tol) ? 1 : 0;
        mi = std::max(mi, hn.identity);
        mf = std::max(mf, hn.fd);
        gap = std::max(gap, std::abs(hn.identity - hn.fd));
        margin = std::min(margin, hn.bound - hn.identity);
      }
      r.table.add({t, nodes, viol, mi, mf, gap, margin});
    }
    r.quantities = {{"violations", static_cast<double>(H.violations)},
                    {"max_gap", H.max_gap},
                    {"c2", H.c2},
                    {"neumann_regime", H.neumann_regime ? 1.0 : 0.0}};
  };
}

std::vector<Operation> build() {
  using S = SubjectKind;
  return {
      {"eval_F", "functional", "Gaussian area F_t", S::surface, {"F_min", "F_max", "F_spread"}, prepare_F},
      {"eval_F_prime", "functional", "dF/dt of a shrinker: boundary flux plus G_t", S::surface,
       {"max_fd_gap", "abs_F_prime_at_1", "sign_change"}, prepare_F_prime},
      {"eval_G", "functional", "normal term G_t", S::surface, {"G_max", "G_min"}, prepare_G},
      {"eval_Xi", "functional", "Xi_t with a homogeneous test function", S::surface, {"max_spread"}, prepare_Xi},
      {"shrinker_residual", "functional", "shrinker equation H + X^N/2 = 0", S::surface, {"sup", "l2"},
       prepare_residual},
      {"drift_identity", "functional", "Laplacian of |X|^2 equals 2n - |X^N|^2", S::surface, {"sup", "sup_all"},
       prepare_drift},
      {"verify_monotonicity", "monotonicity", "monotonicity of F_t with boundary term", S::surface,
       {"lhs", "boundary", "normal", "defect", "budget", "pass"}, prepare_ledger},
      {"xi_derivative_bound", "monotonicity", "derivative bound for Xi_t with c_R and c_1", S::surface,
       {"min_margin", "violations"}, prepare_xi_bound},
      {"radial_mass_profile", "cone", "r^{-n} int phi over M cap B_r", S::surface, {"max_spread"}, prepare_profile},
      {"cone_deviation", "cone", "cross-sections of t^{-1} M on the unit sphere", S::surface,
       {"max_deviation", "last_deviation"}, prepare_deviation},
      {"xi_limit_consistency", "cone", "Xi_1(t^{-1} M) against Xi_{t^2}(M)", S::surface,
       {"max_spread", "identity_error"}, prepare_xi_limit},
      {"gaussian_transform", "moment", "Gaussian transform of a monotone mass function", S::moment,
       {"mean", "spread"}, prepare_transform},
      {"constancy_test", "moment", "constant transform forces V = kappa r^n", S::moment,
       {"spread", "kappa1", "homogeneous"}, prepare_constancy},
      {"moment_separation", "moment", "high moments of V - kappa r^n", S::moment,
       {"kappa1", "min_relative", "max_relative", "last_relative"}, prepare_separation},
      {"laplace_asymptotic_I", "moment", "Laplace asymptotic I(p) -> sqrt(pi)", S::none,
       {"last_relative_error", "monotone"}, prepare_laplace},
      {"annulus_profile", "regularity", "annulus integrals of |B|^p", S::surface, {"sup", "decays"},
       prepare_annulus},
      {"eval_I", "regularity", "scaled space-time |B|^p integral of sqrt(-t) M", S::surface,
       {"I", "chain_bound", "chain_margin"}, prepare_eval_I},
      {"alpha_supremum", "regularity", "sup over s >= 1 of (s^{2a} - 1)/(s^2 - 1)^a", S::none,
       {"max_error", "monotone"}, prepare_alpha},
      {"curvature_estimate_ratio", "regularity", "|B| on the sphere of radius (r+1)t", S::surface,
       {"max_ratio", "hypothesis_met"}, prepare_curvature_estimate},
      {"volume_growth", "regularity", "end volume growth V_s(r)", S::surface,
       {"V_last", "min_scaled_residual", "log_slope", "hypothesis_met"}, prepare_volume_growth},
      {"graph_residual", "graph", "graph equation g^{ij} u_ij = (-u + x.Du)/2", S::graph,
       {"sup", "interior_sup"}, prepare_graph_residual},
      {"decay_constants", "graph", "decay |D^j u| <= c_M |x|^{1-j}", S::graph, {"c_M", "c0", "c1", "c2"},
       prepare_decay},
      {"solve_graph_shrinker", "graph", "Newton solve of the graph equation", S::none,
       {"final_residual", "iterations", "c_M"}, prepare_solve},
      {"rescaled_heat_check", "graph", "heat inequality for U = sqrt(t) u(x/sqrt(t))", S::graph,
       {"violations", "max_gap", "c2", "neumann_regime"}, prepare_heat},
  };
}

}  // namespace

const std::vector<Operation>& operations() {
  static const std::vector<Operation> ops = build();
  return ops;
}

const Operation* find_operation(const std::string& name) {
  for (const auto& op : operations())
    if (op.name == name) return &op;
  return nullptr;
}

}  // namespace shrinkerlab::cli
