#pragma once

#include "catalog.hpp"
#include "params.hpp"
#include "report.hpp"

#include <shrinkerlab/geom/integrate.hpp>

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace shrinkerlab::cli {

enum class SubjectKind { surface, moment, graph, none };

struct Context {
  const Catalog* catalog = nullptr;
  std::uint64_t seed = 0;
};

/// Resolved subject of a scenario; only the member matching the operation is set.
struct Subject {
  std::string id;
  std::optional<geom::ShrinkerSurface> surface;
  std::optional<moment::MomentFunction> moment;
  std::optional<geom::GraphFunction> graph;
};

/// Work left after validation: fills table, quantities and details.
using Job = std::function<void(Report&)>;

struct Operation {
  std::string name;
  std::string module;
  std::string anchor;
  SubjectKind subject;
  std::vector<std::string> quantities;
  /// Reads and validates the parameters; throws ConfigError.
  std::function<Job(Params&, const Subject&, const Context&)> prepare;
};

const std::vector<Operation>& operations();
const Operation* find_operation(const std::string& name);

}  // namespace shrinkerlab::cli
