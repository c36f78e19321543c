#pragma once

#include "catalog.hpp"
#include "operations.hpp"
#include "report.hpp"

#include <yaml-cpp/yaml.h>

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace shrinkerlab::cli {

struct Check {
  std::string quantity;
  std::optional<double> equals;
  double tol = 0.0;
  std::optional<double> min;
  std::optional<double> max;

  CheckResult evaluate(double value) const;
};

/// A validated scenario, ready to run.
struct Scenario {
  std::string name;
  const Operation* operation = nullptr;
  std::string subject;
  std::vector<Check> checks;
  Job job;
};

struct RunOptions {
  std::filesystem::path out_dir = "shrinkerlab-out";
  double tol = 1e-8;  ///< default for equality checks without their own tol
  unsigned jobs = 1;
  std::uint64_t seed = 20240611;
  std::optional<std::filesystem::path> fixtures;
};

/// Parses and validates a config document; every ConfigError surfaces here,
/// before any scenario runs. `catalog` receives the config's own surfaces.
std::vector<Scenario> load_scenarios(const YAML::Node& doc, const std::string& source,
                                     const std::filesystem::path& base, Catalog& catalog, const RunOptions& options);

/// Runs the scenarios on up to options.jobs threads and returns the reports in
/// scenario order.
std::vector<Report> execute(const std::vector<Scenario>& scenarios, unsigned jobs);

/// Writes per-scenario files and the summary. Returns 0 when every scenario
/// passed, 1 otherwise.
int write_outputs(const std::vector<Report>& reports, const std::filesystem::path& dir, std::ostream& log);

/// Whole "run" command: 2 on config errors (nothing written), 1 on failures.
int run_config(const std::filesystem::path& config, const RunOptions& options, std::ostream& log,
               std::ostream& err);

/// Output directory after the SHRINKERLAB_OUT override.
std::filesystem::path resolve_out_dir(const std::filesystem::path& requested);

}  // namespace shrinkerlab::cli
