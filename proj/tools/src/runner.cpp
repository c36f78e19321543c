#include "runner.hpp"

#include <shrinkerlab/errors.hpp>
#include <shrinkerlab/geom/surface.hpp>

#include <fmt/format.h>

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <ostream>
#include <set>
#include <thread>

namespace shrinkerlab::cli {

namespace {

std::string stamp_now() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return fmt::format("shrinkerlab {} generated {}", SHRINKERLAB_VERSION, buf);
}

int node_line(const YAML::Node& n) { return n ? n.Mark().line + 1 : 0; }

geom::ShrinkerSurface custom_surface(Params& p) {
  const auto kind = p.text("kind");
  const std::optional<double> exterior = p.has("exterior") ? std::optional<double>(p.number("exterior")) : std::nullopt;
  if (exterior && !(*exterior > 0.0)) p.fail("exterior", "must be positive");
  const long long n = p.integer("n", 2);
  if (n < 1 || n > 6) p.fail("n", "must lie in 1..6");
  if (kind == "plane") {
    const long long m = p.integer("m", 1);
    if (m < 1 || m > 4) p.fail("m", "must lie in 1..4");
    return geom::make_plane(static_cast<int>(n), static_cast<int>(m), exterior);
  }
  if (kind == "sphere") {
    const double r = p.number("radius", std::sqrt(2.0 * n));
    if (!(r > 0.0)) p.fail("radius", "must be positive");
    if (exterior) p.fail("exterior", "not supported for spheres");
    return geom::make_sphere(static_cast<int>(n), r);
  }
  if (kind == "cylinder") {
    const long long k = p.integer("k", 1);
    if (k < 1 || k >= n) p.fail("k", "must lie in 1..n-1");
    const double r = p.number("radius", std::sqrt(2.0 * k));
    if (!(r > 0.0)) p.fail("radius", "must be positive");
    return geom::make_cylinder(static_cast<int>(n), static_cast<int>(k), r, exterior);
  }
  p.fail("kind", "expected plane, sphere or cylinder");
}

Check parse_check(const YAML::Node& node, const std::string& source, const Operation& op, double default_tol) {
  Params p(node, source);
  Check c;
  c.quantity = p.text("quantity");
  bool known = false;
  for (const auto& q : op.quantities) known = known || q == c.quantity;
  if (!known) {
    std::string names;
    for (const auto& q : op.quantities) names += (names.empty() ? "" : ", ") + q;
    p.fail("quantity", fmt::format("'{}' is not reported by {} (has {})", c.quantity, op.name, names));
  }
  if (p.has("equals")) c.equals = p.number("equals");
  c.tol = p.number("tol", default_tol);
  if (p.has("min")) c.min = p.number("min");
  if (p.has("max")) c.max = p.number("max");
  if (!c.equals && !c.min && !c.max) p.fail("quantity", "a check needs equals, min or max");
  if (!(c.tol >= 0.0)) p.fail("tol", "must be nonnegative");
  p.finish();
  return c;
}

Subject resolve_subject(Params& p, const Operation& op, const Catalog& catalog) {
  Subject s;
  switch (op.subject) {
    case SubjectKind::surface:
      s.id = p.text("surface");
      if (!catalog.has_surface(s.id)) p.fail("surface", fmt::format("unknown surface id '{}'", s.id));
      break;
    case SubjectKind::moment:
      s.id = p.text("moment");
      if (!catalog.has_moment(s.id)) p.fail("moment", fmt::format("unknown moment function id '{}'", s.id));
      break;
    case SubjectKind::graph:
      s.id = p.text("graph");
      if (!catalog.has_graph(s.id)) p.fail("graph", fmt::format("unknown graph id '{}'", s.id));
      break;
    case SubjectKind::none:
      return s;
  }
  try {
    if (op.subject == SubjectKind::surface) s.surface = catalog.surface(s.id);
    if (op.subject == SubjectKind::moment) s.moment = catalog.moment(s.id);
    if (op.subject == SubjectKind::graph) s.graph = catalog.graph(s.id);
  } catch (const ParseError& e) {
    p.fail(op.subject == SubjectKind::surface ? "surface" : op.subject == SubjectKind::moment ? "moment" : "graph",
           e.what());
  }
  return s;
}

}  // namespace

CheckResult Check::evaluate(double value) const {
  CheckResult r;
  r.quantity = quantity;
  r.value = value;
  r.pass = std::isfinite(value);
  std::string rule;
  if (equals) {
    rule = fmt::format("= {} +- {}", *equals, tol);
    r.pass = r.pass && std::abs(value - *equals) <= tol;
  }
  if (min) {
    rule += fmt::format("{}>= {}", rule.empty() ? "" : ", ", *min);
    r.pass = r.pass && value >= *min;
  }
  if (max) {
    rule += fmt::format("{}<= {}", rule.empty() ? "" : ", ", *max);
    r.pass = r.pass && value <= *max;
  }
  r.rule = rule;
  return r;
}

std::vector<Scenario> load_scenarios(const YAML::Node& doc, const std::string& source,
                                     const std::filesystem::path&, Catalog& catalog, const RunOptions& options) {
  if (!doc || !doc.IsMap()) throw ConfigError(source, node_line(doc), "config must be a mapping");
  static const std::set<std::string> top_keys{"tol", "fixtures", "surfaces", "scenarios"};
  for (const auto& kv : doc) {
    const auto key = kv.first.as<std::string>();
    if (!top_keys.count(key)) throw ConfigError(source, node_line(kv.first), "unknown key '" + key + "'");
  }
  double default_tol = options.tol;
  if (doc["tol"]) {
    try {
      default_tol = doc["tol"].as<double>();
    } catch (const YAML::Exception&) {
      throw ConfigError(source, node_line(doc["tol"]), "tol must be a number");
    }
  }

  if (const auto list = doc["surfaces"]) {
    if (!list.IsSequence()) throw ConfigError(source, node_line(list), "surfaces must be a list");
    for (const auto& item : list) {
      Params p(item, source);
      const auto id = p.text("id");
      if (catalog.has_surface(id)) p.fail("id", fmt::format("surface id '{}' already exists", id));
      auto s = custom_surface(p);
      p.finish();
      catalog.add_surface(id, s.with_label(id), s.describe());
    }
  }

  const auto list = doc["scenarios"];
  if (!list || !list.IsSequence() || list.size() == 0)
    throw ConfigError(source, node_line(doc), "config needs a non-empty scenarios list");

  const Context ctx{&catalog, options.seed};
  std::vector<Scenario> out;
  std::set<std::string> names;
  for (const auto& item : list) {
    Params p(item, source);
    Scenario sc;
    sc.name = p.text("name");
    if (sc.name.empty() || sc.name.find_first_of("/\\ ") != std::string::npos || sc.name == "summary")
      p.fail("name", "scenario names must be non-empty file-safe words other than 'summary'");
    if (!names.insert(sc.name).second) p.fail("name", fmt::format("duplicate scenario name '{}'", sc.name));
    const auto op_name = p.text("operation");
    sc.operation = find_operation(op_name);
    if (!sc.operation) p.fail("operation", fmt::format("unknown operation '{}'", op_name));
    const auto subject = resolve_subject(p, *sc.operation, catalog);
    sc.subject = subject.id;

    Params params(item["params"], source);
    try {
      sc.job = sc.operation->prepare(params, subject, ctx);
    } catch (const Error& e) {
      throw ConfigError(source, params.line() ? params.line() : p.line(), e.what());
    }
    params.finish();

    if (const auto checks = item["checks"]) {
      if (!checks.IsSequence()) throw ConfigError(source, node_line(checks), "checks must be a list");
      for (const auto& c : checks) sc.checks.push_back(parse_check(c, source, *sc.operation, default_tol));
    }
    p.mark("params");
    p.mark("checks");
    p.finish();
    out.push_back(std::move(sc));
  }
  return out;
}

std::vector<Report> execute(const std::vector<Scenario>& scenarios, unsigned jobs) {
  std::vector<Report> reports(scenarios.size());
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t i = next++; i < scenarios.size(); i = next++) {
      const auto& sc = scenarios[i];
      Report& r = reports[i];
      r.name = sc.name;
      r.module = sc.operation->module;
      r.operation = sc.operation->name;
      r.anchor = sc.operation->anchor;
      r.subject = sc.subject;
      try {
        sc.job(r);
        for (const auto& c : sc.checks) r.checks.push_back(c.evaluate(r.quantity(c.quantity)));
        for (const auto& c : r.checks)
          if (!c.pass) r.status = "failed";
      } catch (const std::exception& e) {
        r.status = "error";
        r.message = e.what();
      }
    }
  };
  const unsigned n = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(scenarios.size())));
  std::vector<std::thread> pool;
  for (unsigned k = 1; k < n; ++k) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return reports;
}

int write_outputs(const std::vector<Report>& reports, const std::filesystem::path& dir, std::ostream& log) {
  std::filesystem::create_directories(dir);
  const auto stamp = stamp_now();
  int status = 0;
  for (const auto& r : reports) {
    write_report(dir, r, stamp);
    const char* tag = r.status == "ok" ? "PASS" : r.status == "failed" ? "FAIL" : "ERROR";
    log << fmt::format("{:<5} {} ({} on {})", tag, r.name, r.operation, r.subject.empty() ? "-" : r.subject);
    if (!r.message.empty()) log << ": " << r.message;
    log << '\n';
    for (const auto& c : r.checks)
      if (!c.pass) log << fmt::format("        {} = {:.10g}, wanted {}\n", c.quantity, c.value, c.rule);
    if (r.status != "ok") status = 1;
  }
  write_summary(dir, reports, stamp);
  return status;
}

std::filesystem::path resolve_out_dir(const std::filesystem::path& requested) {
  if (const char* env = std::getenv("SHRINKERLAB_OUT"); env && *env) return env;
  return requested;
}

int run_config(const std::filesystem::path& config, const RunOptions& options, std::ostream& log,
               std::ostream& err) {
  std::vector<Scenario> scenarios;
  try {
    std::ifstream in(config);
    if (!in) throw ConfigError(config.string(), 0, "cannot open config");
    YAML::Node doc;
    try {
      doc = YAML::Load(in);
    } catch (const YAML::ParserException& e) {
      throw ConfigError(config.string(), e.mark.line + 1, e.msg);
    }
    auto fixtures = options.fixtures;
    if (doc.IsMap() && doc["fixtures"]) {
      if (!doc["fixtures"].IsScalar())
        throw ConfigError(config.string(), node_line(doc["fixtures"]), "fixtures must be a path");
      fixtures = config.parent_path() / doc["fixtures"].as<std::string>();
      if (!std::filesystem::is_directory(*fixtures))
        throw ConfigError(config.string(), node_line(doc["fixtures"]), "fixtures directory not found");
    }
    Catalog catalog(fixtures ? fixtures : std::optional<std::filesystem::path>(default_fixture_dir()));
    scenarios = load_scenarios(doc, config.string(), config.parent_path(), catalog, options);
    const auto reports = execute(scenarios, options.jobs);
    return write_outputs(reports, resolve_out_dir(options.out_dir), log);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
}

}  // namespace shrinkerlab::cli
