#include "cli.hpp"

#include "catalog.hpp"
#include "runner.hpp"

#include <shrinkerlab/errors.hpp>
#include <shrinkerlab/test_function.hpp>

#include <CLI11.hpp>
#include <fmt/format.h>

#include <algorithm>
#include <ostream>

namespace shrinkerlab::cli {

namespace {

void print_catalog(const Catalog& catalog, std::ostream& out) {
  out << "kind,id,summary,origin\n";
  for (const auto& e : catalog.list())
    out << csv_quote(e.kind) << ',' << csv_quote(e.id) << ',' << csv_quote(e.summary) << ',' << csv_quote(e.origin)
        << '\n';
  for (const auto& phi : functionals::bundled_test_functions(3))
    out << "phi," << csv_quote(phi.id()) << ','
        << csv_quote(fmt::format("|phi|_0 = {:g}, |phi|_1 = {:g} in R^3", phi.norm0(), phi.norm1())) << ",built-in\n";
  out << "operations:\n";
  for (const auto& op : operations()) {
    out << fmt::format("  {:<12} {:<26} {}\n", op.module, op.name, op.anchor);
    std::string q;
    for (const auto& name : op.quantities) q += (q.empty() ? "" : ", ") + name;
    out << fmt::format("  {:<12} {:<26} reports {}\n", "", "", q);
  }
}

// "name=1", "name<=1", "name>=1" into a YAML check entry
YAML::Node check_node(const std::string& text, double tol) {
  YAML::Node n;
  for (const auto* op : {"<=", ">=", "="}) {
    const auto pos = text.find(op);
    if (pos == std::string::npos) continue;
    n["quantity"] = text.substr(0, pos);
    const auto value = text.substr(pos + std::string(op).size());
    if (std::string(op) == "<=") n["max"] = value;
    else if (std::string(op) == ">=") n["min"] = value;
    else {
      n["equals"] = value;
      n["tol"] = tol;
    }
    return n;
  }
  throw ConfigError("--check", 0, "expected quantity=value, quantity<=value or quantity>=value: " + text);
}

YAML::Node scalar_or_yaml(const std::string& text) {
  try {
    return YAML::Load(text);
  } catch (const YAML::Exception&) {
    return YAML::Node(text);
  }
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Numerical lab for self-shrinkers of mean curvature flow", "shrinkerlab"};
  app.require_subcommand(1);

  RunOptions opt;
  std::string out_dir = opt.out_dir.string();
  std::string fixtures;
  unsigned jobs = 1;
  const auto common = [&](CLI::App* sub) {
    sub->add_option("--out-dir", out_dir, "directory for reports (SHRINKERLAB_OUT overrides)");
    sub->add_option("--tol", opt.tol, "default tolerance of equality checks")->check(CLI::PositiveNumber);
    sub->add_option("--jobs", jobs, "scenarios run in parallel")->check(CLI::Range(1u, 256u));
    sub->add_option("--seed", opt.seed, "seed for sampled cross-sections");
    sub->add_option("--fixtures", fixtures, "fixture directory")->check(CLI::ExistingDirectory);
  };

  std::string config;
  auto* run = app.add_subcommand("run", "run every scenario of a config file");
  run->add_option("--config,config", config, "YAML config")->required()->check(CLI::ExistingFile);
  common(run);

  auto* list = app.add_subcommand("list", "print built-in surfaces, test functions, fixtures and operations");
  list->add_option("--fixtures", fixtures, "fixture directory")->check(CLI::ExistingDirectory);

  struct ModuleArgs {
    std::string op, subject, name;
    std::vector<std::string> sets, checks;
  };
  std::map<std::string, ModuleArgs> margs;
  std::vector<std::pair<std::string, CLI::App*>> modules;
  for (const char* module : {"functional", "monotonicity", "cone", "moment", "regularity", "graph"}) {
    auto& a = margs[module];
    std::string ops;
    for (const auto& op : operations())
      if (op.module == module) ops += (ops.empty() ? "" : ", ") + op.name;
    auto* sub = app.add_subcommand(module, fmt::format("run one {} operation ({})", module, ops));
    sub->add_option("op", a.op, "operation name")->required();
    sub->add_option("--subject", a.subject, "surface, moment or graph id");
    sub->add_option("--name", a.name, "scenario name (defaults to the operation)");
    sub->add_option("--set", a.sets, "parameter as key=value; values are YAML");
    sub->add_option("--check", a.checks, "quantity=value, quantity<=value or quantity>=value");
    common(sub);
    modules.emplace_back(module, sub);
  }

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return 0;
    }
    err << e.what() << '\n';
    return 2;
  }
  opt.out_dir = out_dir;
  opt.jobs = jobs;
  if (!fixtures.empty()) opt.fixtures = fixtures;

  if (*list) {
    Catalog catalog(opt.fixtures ? opt.fixtures : std::optional<std::filesystem::path>(default_fixture_dir()));
    print_catalog(catalog, out);
    return 0;
  }
  if (*run) return run_config(config, opt, out, err);

  for (const auto& [module, sub] : modules) {
    if (!*sub) continue;
    const auto& a = margs[module];
    try {
      const auto* op = find_operation(a.op);
      if (!op || op->module != module) throw ConfigError("command line", 0, fmt::format("no {} operation '{}'", module, a.op));
      YAML::Node sc;
      sc["name"] = a.name.empty() ? a.op : a.name;
      sc["operation"] = a.op;
      const char* key = op->subject == SubjectKind::surface  ? "surface"
                        : op->subject == SubjectKind::moment ? "moment"
                        : op->subject == SubjectKind::graph  ? "graph"
                                                              : nullptr;
      if (key) sc[key] = a.subject;
      else if (!a.subject.empty()) throw ConfigError("command line", 0, a.op + " takes no subject");
      YAML::Node params(YAML::NodeType::Map);
      for (const auto& s : a.sets) {
        const auto eq = s.find('=');
        if (eq == std::string::npos || eq == 0) throw ConfigError("--set", 0, "expected key=value: " + s);
        params[s.substr(0, eq)] = scalar_or_yaml(s.substr(eq + 1));
      }
      sc["params"] = params;
      for (const auto& c : a.checks) sc["checks"].push_back(check_node(c, opt.tol));
      YAML::Node doc;
      doc["scenarios"].push_back(sc);
      Catalog catalog(opt.fixtures ? opt.fixtures : std::optional<std::filesystem::path>(default_fixture_dir()));
      const auto scenarios = load_scenarios(doc, "command line", ".", catalog, opt);
      const auto reports = execute(scenarios, 1);
      const int status = write_outputs(reports, resolve_out_dir(opt.out_dir), out);
      for (const auto& [q, v] : reports.front().quantities) out << fmt::format("  {} = {:.15g}\n", q, v);
      return status;
    } catch (const ConfigError& e) {
      err << "config error: " << e.what() << '\n';
      return 2;
    } catch (const Error& e) {
      err << "error: " << e.what() << '\n';
      return 2;
    }
  }
  return 2;
}

}  // namespace shrinkerlab::cli
