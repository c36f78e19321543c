#include "catalog.hpp"

#include <shrinkerlab/errors.hpp>
#include <shrinkerlab/geom/builders.hpp>
#include <shrinkerlab/io.hpp>

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <mutex>
#include <variant>

namespace shrinkerlab::cli {

using Loaded = std::variant<std::monostate, geom::ShrinkerSurface, moment::MomentFunction, geom::GraphFunction>;

struct Catalog::Source {
  std::string summary;
  std::string origin;
  std::function<Loaded()> load;
  std::once_flag once;
  Loaded value;

  const Loaded& get() {
    std::call_once(once, [this] { value = load(); });
    return value;
  }
};

namespace {

std::shared_ptr<Catalog::Source> make_source(std::string summary, std::string origin, std::function<Loaded()> load) {
  auto s = std::make_shared<Catalog::Source>();
  s->summary = std::move(summary);
  s->origin = std::move(origin);
  s->load = std::move(load);
  return s;
}

std::string shrinker_flag(const geom::ShrinkerSurface& s) {
  return s.is_catalog_shrinker() ? "shrinker" : "not a catalog shrinker";
}

}  // namespace

std::filesystem::path default_fixture_dir() {
#ifdef SHRINKERLAB_FIXTURES_DIR
  return SHRINKERLAB_FIXTURES_DIR;
#else
  return "fixtures";
#endif
}

Catalog::Catalog(std::optional<std::filesystem::path> fixtures) {
  const double r2 = std::sqrt(2.0);
  const auto analytic = [&](const std::string& id, std::function<geom::ShrinkerSurface()> make) {
    const auto s = make();
    surfaces_[id] = make_source(s.describe() + ", " + shrinker_flag(s), "built-in", [s] { return Loaded(s); });
  };
  analytic("plane", [] { return geom::make_plane(2, 1).with_label("plane"); });
  analytic("sphere", [] { return geom::make_sphere(2, 2.0).with_label("sphere"); });
  analytic("cylinder", [&] { return geom::make_cylinder(2, 1, r2).with_label("cylinder"); });
  analytic("circle", [&] { return geom::make_sphere(1, r2).with_label("circle"); });
  analytic("ext-plane", [] { return geom::make_plane(2, 1, 1.0).with_label("ext-plane"); });
  analytic("ext-cylinder", [&] { return geom::make_cylinder(2, 1, r2, 2.0).with_label("ext-cylinder"); });
  surfaces_["mesh-sphere"] = make_source("icosphere radius 2, level 3, 642 vertices", "built-in",
                                         [] { return Loaded(geom::make_icosphere(2.0, 3).with_label("mesh-sphere")); });
  surfaces_["mesh-cylinder"] =
      make_source("cylinder mesh radius sqrt(2), half length 2, 32 x 16 quads", "built-in",
                  [r2] { return Loaded(geom::make_cylinder_mesh(r2, 2.0, 32, 16).with_label("mesh-cylinder")); });
  surfaces_["polyline-circle"] =
      make_source("closed polyline on the circle of radius sqrt(2), 256 points", "built-in",
                  [r2] { return Loaded(geom::make_circle_polyline(r2, 256).with_label("polyline-circle")); });

  moments_["power-n1"] = make_source("V = r on [1e-6, 300], ratio 1 + 1e-4", "built-in",
                                     [] { return Loaded(moment::power_law(1, 1.0, 1e-6, 300.0, 1.0 + 1e-4)); });
  moments_["power-n2"] = make_source("V = r^2 on [1e-6, 300], ratio 1 + 1e-4", "built-in",
                                     [] { return Loaded(moment::power_law(2, 1.0, 1e-6, 300.0, 1.0 + 1e-4)); });
  moments_["bump-above"] =
      make_source("V = r^2 + 0.1 cos^2 bump at r = 2, width 0.5", "built-in",
                  [] { return Loaded(moment::bump(2, 2.0, 0.1, 0.5, 1, 1e-4, 200.0, 1.002)); });
  moments_["bump-below"] =
      make_source("V = r^2 - 0.1 cos^2 bump at r = 2, width 0.5", "built-in",
                  [] { return Loaded(moment::bump(2, 2.0, 0.1, 0.5, -1, 1e-4, 200.0, 1.002)); });

  graphs_["graph-linear"] = make_source("u = (0.12, -0.16).x on the annulus [2, 8], h = 0.25", "built-in", [] {
    return Loaded(geom::GraphFunction::sample(geom::GraphGrid::over_annulus(2.0, 8.0, 0.25), 1,
                                              [](const geom::Point2& x) { return Vec::Constant(1, 0.12 * x[0] - 0.16 * x[1]); }));
  });
  graphs_["graph-zero"] = make_source("u = 0 on the annulus [2, 8], h = 0.25", "built-in", [] {
    return Loaded(geom::GraphFunction::sample(geom::GraphGrid::over_annulus(2.0, 8.0, 0.25), 1,
                                              [](const geom::Point2&) { return Vec::Zero(1); }));
  });

  if (!fixtures || !std::filesystem::is_directory(*fixtures)) return;
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::recursive_directory_iterator(*fixtures))
    if (entry.is_regular_file()) files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  for (const auto& path : files) {
    const std::string id = path.stem().string();
    const std::string ext = path.extension().string();
    const std::string origin = path.string();
    if (ext == ".mesh" || ext == ".curve") {
      surfaces_[id] = make_source(ext == ".mesh" ? "triangle mesh fixture" : "polyline fixture", origin,
                                  [path, id] { return Loaded(io::read_discrete(path).with_label(id)); });
    } else if (ext == ".moment") {
      moments_[id] = make_source("moment table fixture", origin, [path] { return Loaded(io::read_moment_table(path)); });
    } else if (ext == ".graph") {
      graphs_[id] = make_source("graph table fixture", origin, [path] { return Loaded(io::read_graph_table(path)); });
    }
  }
}

std::vector<CatalogEntry> Catalog::list() const {
  std::vector<CatalogEntry> out;
  for (const auto& [kind, map] : {std::pair{"surface", &surfaces_}, std::pair{"moment", &moments_},
                                  std::pair{"graph", &graphs_}})
    for (const auto& [id, src] : *map) out.push_back({id, kind, src->summary, src->origin});
  return out;
}

bool Catalog::has_surface(const std::string& id) const { return surfaces_.count(id) > 0; }
bool Catalog::has_moment(const std::string& id) const { return moments_.count(id) > 0; }
bool Catalog::has_graph(const std::string& id) const { return graphs_.count(id) > 0; }

geom::ShrinkerSurface Catalog::surface(const std::string& id) const {
  const auto it = surfaces_.find(id);
  if (it == surfaces_.end()) throw DomainError("unknown surface '" + id + "'");
  return std::get<geom::ShrinkerSurface>(it->second->get());
}

moment::MomentFunction Catalog::moment(const std::string& id) const {
  const auto it = moments_.find(id);
  if (it == moments_.end()) throw DomainError("unknown moment function '" + id + "'");
  return std::get<moment::MomentFunction>(it->second->get());
}

geom::GraphFunction Catalog::graph(const std::string& id) const {
  const auto it = graphs_.find(id);
  if (it == graphs_.end()) throw DomainError("unknown graph '" + id + "'");
  return std::get<geom::GraphFunction>(it->second->get());
}

void Catalog::add_surface(const std::string& id, geom::ShrinkerSurface surface, std::string summary) {
  surfaces_[id] = make_source(std::move(summary), "config", [s = std::move(surface)] { return Loaded(s); });
}

}  // namespace shrinkerlab::cli
