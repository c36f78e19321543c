#include <doctest.h>

#include <shrinkerlab/errors.hpp>
#include <shrinkerlab/geom/builders.hpp>
#include <shrinkerlab/io.hpp>

#include <sstream>

using namespace shrinkerlab;

TEST_CASE("mesh round trip") {
  const auto s = geom::make_icosphere(2.0, 1);
  std::stringstream ss;
  io::write_discrete(ss, s);
  const auto back = io::parse_discrete(ss, "mem");
  REQUIRE(back.element_count() == s.element_count());
  for (std::size_t e = 0; e < s.element_count(); ++e)
    CHECK((back.element_position(e) - s.element_position(e)).norm() == 0.0);
}

TEST_CASE("curve parsing") {
  std::istringstream in("# square\ncurve 4 2 closed\n1 0\n0 1\n-1 0\n0 -1\n");
  const auto c = io::parse_discrete(in, "mem");
  CHECK(c.dim() == 1);
  CHECK(c.element_count() == 4);
}

TEST_CASE("parse errors carry line numbers") {
  std::istringstream bad("vertices 3 3\n0 0 0\n1 0 x\n0 1 0\nfaces 1\n0 1 2\n");
  try {
    io::parse_discrete(bad, "bad.mesh");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
  }
  std::istringstream range("vertices 3 3\n0 0 0\n1 0 0\n0 1 0\nfaces 1\n0 1 7\n");
  CHECK_THROWS_AS(io::parse_discrete(range, "range.mesh"), ParseError);
}

TEST_CASE("moment tables") {
  std::istringstream in("n 1\nc3 2\n0.1 0.1\n0.1 0.2\n1 1.1\n");
  const auto V = io::parse_moment_table(in, "mem");
  CHECK(V.has_jumps());
  std::stringstream out;
  io::write_moment_table(out, V);
  const auto back = io::parse_moment_table(out, "mem");
  CHECK(back.radii() == V.radii());
  CHECK(back.values() == V.values());
  std::istringstream decreasing("n 1\nc3 2\n0.5 0.5\n1 0.2\n");
  CHECK_THROWS_AS(io::parse_moment_table(decreasing, "dec"), ParseError);
}

TEST_CASE("graph tables") {
  const auto u = geom::GraphFunction::sample(geom::GraphGrid::over_annulus(2.0, 4.0, 0.5), 2, [](const geom::Point2& x) {
    Vec v(2);
    v << x[0], 0.5 * x[1];
    return v;
  });
  std::stringstream ss;
  io::write_graph_table(ss, u);
  const auto back = io::parse_graph_table(ss, "mem");
  CHECK(back.m() == 2);
  CHECK(back.active_nodes() == u.active_nodes());
  for (int node : u.active_nodes())
    for (int a = 0; a < 2; ++a) CHECK(back.value(node, a) == u.value(node, a));
  std::istringstream missing("n 2\nm 1\nannulus 2 4\n");
  CHECK_THROWS_AS(io::parse_graph_table(missing, "short"), ParseError);
}
