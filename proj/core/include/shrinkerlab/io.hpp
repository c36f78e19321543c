#pragma once

#include "shrinkerlab/geom/graph_function.hpp"
#include "shrinkerlab/geom/surface.hpp"
#include "shrinkerlab/moment.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>

namespace shrinkerlab::io {

// Plain whitespace tables; '#' starts a comment. Readers throw ParseError with the line.
//
// Mesh:     "vertices <count> <dim>", count coordinate rows, then
//           "faces <count>" and 0-based index triples.
// Curve:    "curve <count> <dim> open|closed" and count coordinate rows.
// Moment:   "n <int>", "c3 <value>", then "r V" rows (a repeated r is a jump).
// Graph:    "n 2", "m <int>", "annulus <inner> <outer>", "spacing <h>", then
//           "x y u1 .. um" rows, one per node in the annulus.

geom::ShrinkerSurface parse_discrete(std::istream& in, const std::string& source);
geom::ShrinkerSurface read_discrete(const std::filesystem::path& path);
void write_discrete(std::ostream& out, const geom::ShrinkerSurface& surface);

moment::MomentFunction parse_moment_table(std::istream& in, const std::string& source);
moment::MomentFunction read_moment_table(const std::filesystem::path& path);
void write_moment_table(std::ostream& out, const moment::MomentFunction& V);

geom::GraphFunction parse_graph_table(std::istream& in, const std::string& source);
geom::GraphFunction read_graph_table(const std::filesystem::path& path);
void write_graph_table(std::ostream& out, const geom::GraphFunction& u);

}  // namespace shrinkerlab::io
