#include <doctest.h>

#include "cli.hpp"
#include "report.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;
using shrinkerlab::cli::run_cli;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    static int counter = 0;
    path = fs::temp_directory_path() / ("shrinkerlab-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

fs::path write(const fs::path& p, const std::string& text) {
  std::ofstream(p) << text;
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run(std::vector<std::string> args, std::string* out = nullptr, std::string* err = nullptr) {
  std::ostringstream o, e;
  const int rc = run_cli(args, o, e);
  if (out) *out = o.str();
  if (err) *err = e.str();
  return rc;
}

}  // namespace

TEST_CASE("one eval_F scenario passes") {
  TempDir d;
  const auto cfg = write(d.path / "c.yaml", R"(scenarios:
  - name: plane-F
    operation: eval_F
    surface: plane
    params: {times: [1]}
    checks:
      - {quantity: F_max, equals: 1}
)");
  const auto out = d.path / "out";
  CHECK(run({"run", cfg.string(), "--out-dir", out.string()}) == 0);
  const auto csv = slurp(out / "plane-F.csv");
  CHECK(csv.rfind("# ", 0) == 0);
  CHECK(csv.find("t,F,error\n1,1,") != std::string::npos);
  CHECK(slurp(out / "summary.csv").find("plane-F,functional,eval_F,plane,ok,1,1") != std::string::npos);
  CHECK(fs::exists(out / "plane-F.json"));
}

TEST_CASE("validation failures exit 2 and write nothing") {
  TempDir d;
  const auto out = d.path / "out";
  const auto unknown = write(d.path / "u.yaml", R"(scenarios:
  - name: a
    operation: eval_F
    surface: plane
  - name: b
    operation: eval_F
    surface: no-such-surface
)");
  std::string err;
  CHECK(run({"run", unknown.string(), "--out-dir", out.string()}, nullptr, &err) == 2);
  CHECK(err.find("no-such-surface") != std::string::npos);
  CHECK(err.find("u.yaml:7") != std::string::npos);
  CHECK_FALSE(fs::exists(out));

  const auto key = write(d.path / "k.yaml", R"(scenarios:
  - name: a
    operation: eval_F
    surface: plane
    params:
      times: [1]
      tmes: [2]
)");
  CHECK(run({"run", key.string(), "--out-dir", out.string()}, nullptr, &err) == 2);
  CHECK(err.find("k.yaml:7") != std::string::npos);
  CHECK(err.find("tmes") != std::string::npos);

  const auto op = write(d.path / "o.yaml", "scenarios:\n  - {name: a, operation: eval_Q, surface: plane}\n");
  CHECK(run({"run", op.string(), "--out-dir", out.string()}, nullptr, &err) == 2);
  CHECK(err.find("eval_Q") != std::string::npos);

  const auto q = write(d.path / "q.yaml", R"(scenarios:
  - name: a
    operation: eval_F
    surface: plane
    checks: [{quantity: G_max, max: 1}]
)");
  CHECK(run({"run", q.string(), "--out-dir", out.string()}) == 2);

  const auto yaml = write(d.path / "y.yaml", "scenarios:\n  - name: [\n");
  CHECK(run({"run", yaml.string(), "--out-dir", out.string()}) == 2);
  CHECK_FALSE(fs::exists(out));
}

TEST_CASE("failed checks and runtime errors exit 1") {
  TempDir d;
  const auto cfg = write(d.path / "c.yaml", R"(surfaces:
  - {id: small-sphere, kind: sphere, n: 2, radius: 1}
scenarios:
  - name: wrong
    operation: eval_F
    surface: plane
    checks: [{quantity: F_max, equals: 2}]
  - name: not-a-shrinker
    operation: eval_F_prime
    surface: small-sphere
)");
  std::string out;
  CHECK(run({"run", cfg.string(), "--out-dir", (d.path / "out").string()}, &out) == 1);
  CHECK(out.find("FAIL  wrong") != std::string::npos);
  CHECK(out.find("ERROR not-a-shrinker") != std::string::npos);
  CHECK(out.find("needs a shrinker") != std::string::npos);
  CHECK(slurp(d.path / "out" / "summary.csv").find("not-a-shrinker,functional,eval_F_prime,small-sphere,error") !=
        std::string::npos);
}

TEST_CASE("SHRINKERLAB_OUT overrides --out-dir") {
  TempDir d;
  const auto env = d.path / "env";
  ::setenv("SHRINKERLAB_OUT", env.string().c_str(), 1);
  CHECK(run({"functional", "eval_F", "--subject", "plane", "--out-dir", (d.path / "flag").string()}) == 0);
  ::unsetenv("SHRINKERLAB_OUT");
  CHECK(fs::exists(env / "eval_F.csv"));
  CHECK_FALSE(fs::exists(d.path / "flag"));
}

TEST_CASE("module subcommands") {
  TempDir d;
  std::string out, err;
  CHECK(run({"moment", "constancy_test", "--subject", "power-n2", "--check", "homogeneous=1", "--out-dir",
             d.path.string()},
            &out) == 0);
  CHECK(out.find("kappa1 = ") != std::string::npos);
  CHECK(run({"moment", "eval_F", "--subject", "plane", "--out-dir", d.path.string()}, nullptr, &err) == 2);
  CHECK(run({"regularity", "alpha_supremum", "--set", "alpha=[0.5]", "--check", "max_error<=1e-4", "--out-dir",
             d.path.string()}) == 0);
  CHECK(run({"graph", "graph_residual", "--subject", "graph-linear", "--check", "sup<=1e-12", "--out-dir",
             d.path.string()}) == 0);
}

TEST_CASE("catalog listing") {
  TempDir d;
  std::string base, grown;
  CHECK(run({"list", "--fixtures", d.path.string()}, &base) == 0);
  CHECK(base.find("surface,plane,\"plane n=2 m=1, shrinker\"") != std::string::npos);
  CHECK(base.find("surface,sphere,\"sphere n=2 radius=2, shrinker\"") != std::string::npos);
  CHECK(base.find("surface,cylinder,\"cylinder n=2 k=1 radius=1.41421356237, shrinker\"") != std::string::npos);
  write(d.path / "ring.curve", "curve 4 2 closed\n1 0\n0 1\n-1 0\n0 -1\n");
  CHECK(run({"list", "--fixtures", d.path.string()}, &grown) == 0);
  const auto lines = [](const std::string& s) { return std::count(s.begin(), s.end(), '\n'); };
  CHECK(lines(grown) == lines(base) + 1);
  std::string again;
  run({"list", "--fixtures", d.path.string()}, &again);
  CHECK(again == grown);
}

TEST_CASE("csv quoting") {
  using shrinkerlab::cli::csv_quote;
  CHECK(csv_quote("plain") == "plain");
  CHECK(csv_quote("a,b") == "\"a,b\"");
  CHECK(csv_quote("say \"hi\"") == "\"say \"\"hi\"\"\"");
  CHECK(shrinkerlab::cli::format_cell(0.1) == "0.1");
  CHECK(shrinkerlab::cli::format_cell(1.0 / 3.0) == "0.333333333333333");
}
