#include "shrinkerlab/io.hpp"

#include "shrinkerlab/errors.hpp"

#include <fmt/format.h>

#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

namespace shrinkerlab::io {

namespace {

// Line reader that skips blanks and comments and remembers the line number.
class Lines {
 public:
  Lines(std::istream& in, std::string source) : in_(in), source_(std::move(source)) {}

  bool next(std::istringstream& row) {
    std::string line;
    while (std::getline(in_, line)) {
      ++number_;
      if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      row.clear();
      row.str(line);
      return true;
    }
    return false;
  }

  std::istringstream require(const std::string& what) {
    std::istringstream row;
    if (!next(row)) fail("unexpected end of file, expected " + what);
    return row;
  }

  [[noreturn]] void fail(const std::string& what) const { throw ParseError(source_, number_, what); }

  template <typename T>
  T get(std::istringstream& row, const std::string& what) {
    T value{};
    if (!(row >> value)) fail("expected " + what);
    return value;
  }

  void finish(std::istringstream& row) {
    std::string extra;
    if (row >> extra) fail("unexpected trailing token '" + extra + "'");
  }

  void keyword(std::istringstream& row, const std::string& key) {
    const auto word = get<std::string>(row, "'" + key + "'");
    if (word != key) fail("expected '" + key + "', found '" + word + "'");
  }

  const std::string& source() const { return source_; }

 private:
  std::istream& in_;
  std::string source_;
  int number_ = 0;
};

std::ifstream open(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path.string(), 0, "cannot open file");
  return in;
}

Vec read_point(Lines& lines, int dim) {
  auto row = lines.require("coordinates");
  Vec p(dim);
  for (int k = 0; k < dim; ++k) p[k] = lines.get<double>(row, "coordinate");
  lines.finish(row);
  if (!p.allFinite()) lines.fail("coordinate is not finite");
  return p;
}

// Discrete surfaces from files carry no snap projector; ParseError keeps the line
// of the offending header when construction fails.
template <typename F>
geom::ShrinkerSurface build(Lines& lines, F&& make) {
  try {
    return make();
  } catch (const DomainError& e) {
    lines.fail(e.what());
  }
}

}  // namespace

geom::ShrinkerSurface parse_discrete(std::istream& in, const std::string& source) {
  Lines lines(in, source);
  auto head = lines.require("'vertices' or 'curve'");
  const auto kind = lines.get<std::string>(head, "'vertices' or 'curve'");
  if (kind == "vertices") {
    const int count = lines.get<int>(head, "vertex count");
    const int dim = lines.get<int>(head, "ambient dimension");
    lines.finish(head);
    if (count < 3 || dim < 3) lines.fail("a mesh needs at least 3 vertices in R^3 or higher");
    geom::TriangleMesh mesh;
    for (int i = 0; i < count; ++i) mesh.vertices.push_back(read_point(lines, dim));
    auto fh = lines.require("'faces'");
    lines.keyword(fh, "faces");
    const int faces = lines.get<int>(fh, "face count");
    lines.finish(fh);
    if (faces < 1) lines.fail("a mesh needs at least one face");
    for (int f = 0; f < faces; ++f) {
      auto row = lines.require("face indices");
      std::array<int, 3> tri{};
      for (int& v : tri) {
        v = lines.get<int>(row, "vertex index");
        if (v < 0 || v >= count) lines.fail(fmt::format("vertex index {} out of range", v));
      }
      lines.finish(row);
      mesh.faces.push_back(tri);
    }
    std::istringstream rest;
    if (lines.next(rest)) lines.fail("unexpected content after the face list");
    return build(lines, [&] { return geom::ShrinkerSurface(std::move(mesh)); });
  }
  if (kind == "curve") {
    const int count = lines.get<int>(head, "point count");
    const int dim = lines.get<int>(head, "ambient dimension");
    const auto closure = lines.get<std::string>(head, "'open' or 'closed'");
    lines.finish(head);
    if (closure != "open" && closure != "closed") lines.fail("expected 'open' or 'closed'");
    if (count < 3 || dim < 2) lines.fail("a curve needs at least 3 points in R^2 or higher");
    geom::PolylineCurve curve;
    curve.closed = closure == "closed";
    for (int i = 0; i < count; ++i) curve.vertices.push_back(read_point(lines, dim));
    std::istringstream rest;
    if (lines.next(rest)) lines.fail("unexpected content after the point list");
    return build(lines, [&] { return geom::ShrinkerSurface(std::move(curve)); });
  }
  lines.fail("unknown discrete kind '" + kind + "'");
}

geom::ShrinkerSurface read_discrete(const std::filesystem::path& path) {
  auto in = open(path);
  return parse_discrete(in, path.string()).with_label(path.stem().string());
}

void write_discrete(std::ostream& out, const geom::ShrinkerSurface& surface) {
  const auto row = [&](const Vec& p) {
    for (Eigen::Index k = 0; k < p.size(); ++k) out << (k ? " " : "") << fmt::format("{:.17g}", p[k]);
    out << '\n';
  };
  if (const auto* m = std::get_if<geom::TriangleMesh>(&surface.kind())) {
    out << "vertices " << m->vertices.size() << ' ' << surface.ambient_dim() << '\n';
    for (const Vec& p : m->vertices) row(p);
    out << "faces " << m->faces.size() << '\n';
    for (const auto& f : m->faces) out << f[0] << ' ' << f[1] << ' ' << f[2] << '\n';
    return;
  }
  if (const auto* c = std::get_if<geom::PolylineCurve>(&surface.kind())) {
    out << "curve " << c->vertices.size() << ' ' << surface.ambient_dim() << (c->closed ? " closed" : " open")
        << '\n';
    for (const Vec& p : c->vertices) row(p);
    return;
  }
  throw DomainError("only meshes and curves have a discrete file form");
}

moment::MomentFunction parse_moment_table(std::istream& in, const std::string& source) {
  Lines lines(in, source);
  auto nrow = lines.require("'n'");
  lines.keyword(nrow, "n");
  const int n = lines.get<int>(nrow, "dimension n");
  lines.finish(nrow);
  auto crow = lines.require("'c3'");
  lines.keyword(crow, "c3");
  const double c3 = lines.get<double>(crow, "growth constant");
  lines.finish(crow);
  std::vector<double> r, V;
  std::istringstream row;
  while (lines.next(row)) {
    r.push_back(lines.get<double>(row, "breakpoint"));
    V.push_back(lines.get<double>(row, "value"));
    lines.finish(row);
  }
  try {
    return moment::MomentFunction(n, c3, std::move(r), std::move(V));
  } catch (const DomainError& e) {
    throw ParseError(source, 0, e.what());
  }
}

moment::MomentFunction read_moment_table(const std::filesystem::path& path) {
  auto in = open(path);
  return parse_moment_table(in, path.string());
}

void write_moment_table(std::ostream& out, const moment::MomentFunction& V) {
  out << "n " << V.n() << '\n' << fmt::format("c3 {:.17g}\n", V.c3());
  for (std::size_t i = 0; i < V.radii().size(); ++i)
    out << fmt::format("{:.17g} {:.17g}\n", V.radii()[i], V.values()[i]);
}

geom::GraphFunction parse_graph_table(std::istream& in, const std::string& source) {
  Lines lines(in, source);
  auto nrow = lines.require("'n'");
  lines.keyword(nrow, "n");
  if (lines.get<int>(nrow, "dimension n") != 2) lines.fail("graph tables support n = 2 only");
  lines.finish(nrow);
  auto mrow = lines.require("'m'");
  lines.keyword(mrow, "m");
  const int m = lines.get<int>(mrow, "codimension m");
  lines.finish(mrow);
  if (m < 1) lines.fail("m must be at least 1");
  auto arow = lines.require("'annulus'");
  lines.keyword(arow, "annulus");
  const double inner = lines.get<double>(arow, "inner radius");
  const double outer = lines.get<double>(arow, "outer radius");
  lines.finish(arow);
  auto hrow = lines.require("'spacing'");
  lines.keyword(hrow, "spacing");
  const double h = lines.get<double>(hrow, "spacing");
  lines.finish(hrow);
  geom::GraphGrid grid;
  try {
    grid = geom::GraphGrid::over_annulus(inner, outer, h);
  } catch (const DomainError& e) {
    lines.fail(e.what());
  }
  std::vector<double> values(static_cast<std::size_t>(grid.node_count()) * m, 0.0);
  std::vector<char> seen(grid.node_count(), 0);
  std::istringstream row;
  while (lines.next(row)) {
    const double x = lines.get<double>(row, "x");
    const double y = lines.get<double>(row, "y");
    const double fi = x / h + grid.half;
    const double fj = y / h + grid.half;
    const long i = std::lround(fi);
    const long j = std::lround(fj);
    if (std::abs(fi - i) > 1e-6 || std::abs(fj - j) > 1e-6 || !grid.in_range(static_cast<int>(i), static_cast<int>(j)))
      lines.fail(fmt::format("({}, {}) is not a grid node", x, y));
    const int node = grid.index(static_cast<int>(i), static_cast<int>(j));
    if (!grid.contains(grid.position(node))) lines.fail(fmt::format("({}, {}) lies outside the annulus", x, y));
    if (seen[node]) lines.fail(fmt::format("node ({}, {}) listed twice", x, y));
    seen[node] = 1;
    for (int a = 0; a < m; ++a) values[static_cast<std::size_t>(node) * m + a] = lines.get<double>(row, "u value");
    lines.finish(row);
  }
  for (int node = 0; node < grid.node_count(); ++node) {
    if (grid.contains(grid.position(node)) && !seen[node]) {
      const auto p = grid.position(node);
      throw ParseError(source, 0, fmt::format("missing node ({}, {})", p[0], p[1]));
    }
  }
  return geom::GraphFunction(grid, m, std::move(values));
}

geom::GraphFunction read_graph_table(const std::filesystem::path& path) {
  auto in = open(path);
  return parse_graph_table(in, path.string());
}

void write_graph_table(std::ostream& out, const geom::GraphFunction& u) {
  const auto& g = u.grid();
  out << "n 2\nm " << u.m() << '\n'
      << fmt::format("annulus {:.17g} {:.17g}\nspacing {:.17g}\n", g.inner, g.outer, g.h);
  for (int node : u.active_nodes()) {
    const auto p = g.position(node);
    out << fmt::format("{:.17g} {:.17g}", p[0], p[1]);
    for (int a = 0; a < u.m(); ++a) out << fmt::format(" {:.17g}", u.value(node, a));
    out << '\n';
  }
}

}  // namespace shrinkerlab::io
