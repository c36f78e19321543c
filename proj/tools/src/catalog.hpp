#pragma once

#include <shrinkerlab/geom/graph_function.hpp>
#include <shrinkerlab/geom/surface.hpp>
#include <shrinkerlab/moment.hpp>

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace shrinkerlab::cli {

struct CatalogEntry {
  std::string id;
  std::string kind;     ///< surface, moment or graph
  std::string summary;  ///< parameters and shrinker flag
  std::string origin;   ///< "built-in" or the fixture path
};

/// Built-in surfaces, moment functions and graphs plus whatever the fixture
/// directory holds (*.mesh, *.curve, *.moment, *.graph). Entries load lazily
/// and are cached; lookups of unknown ids throw ParseError-free DomainErrors.
class Catalog {
 public:
  explicit Catalog(std::optional<std::filesystem::path> fixtures = std::nullopt);

  std::vector<CatalogEntry> list() const;

  bool has_surface(const std::string& id) const;
  bool has_moment(const std::string& id) const;
  bool has_graph(const std::string& id) const;

  geom::ShrinkerSurface surface(const std::string& id) const;
  moment::MomentFunction moment(const std::string& id) const;
  geom::GraphFunction graph(const std::string& id) const;

  /// Registers a surface defined in a config file.
  void add_surface(const std::string& id, geom::ShrinkerSurface surface, std::string summary);

  struct Source;

 private:
  std::map<std::string, std::shared_ptr<Source>> surfaces_;
  std::map<std::string, std::shared_ptr<Source>> moments_;
  std::map<std::string, std::shared_ptr<Source>> graphs_;
};

/// Fixture directory compiled into the tool.
std::filesystem::path default_fixture_dir();

}  // namespace shrinkerlab::cli
