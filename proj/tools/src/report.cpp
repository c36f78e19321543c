#include "report.hpp"

#include <shrinkerlab/errors.hpp>

#include <fmt/format.h>

#include <cmath>
#include <fstream>

namespace shrinkerlab::cli {

std::string csv_quote(const std::string& text) {
  if (text.find_first_of(",\"\r\n") == std::string::npos) return text;
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string format_cell(const Cell& cell) {
  if (const auto* d = std::get_if<double>(&cell)) {
    if (std::isnan(*d)) return "nan";
    if (std::isinf(*d)) return *d > 0 ? "inf" : "-inf";
    return fmt::format("{:.15g}", *d);
  }
  if (const auto* i = std::get_if<long long>(&cell)) return std::to_string(*i);
  return csv_quote(std::get<std::string>(cell));
}

double Report::quantity(const std::string& key) const {
  for (const auto& [k, v] : quantities)
    if (k == key) return v;
  throw DomainError("report '" + name + "' has no quantity '" + key + "'");
}

namespace {

Json number(double v) {
  // JSON has no inf/nan; they travel as strings.
  if (std::isfinite(v)) return v;
  return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
}

Json cell_json(const Cell& cell) {
  if (const auto* d = std::get_if<double>(&cell)) return number(*d);
  if (const auto* i = std::get_if<long long>(&cell)) return *i;
  return std::get<std::string>(cell);
}

}  // namespace

Json Report::to_json() const {
  Json j;
  j["name"] = name;
  j["module"] = module;
  j["operation"] = operation;
  j["anchor"] = anchor;
  j["subject"] = subject;
  j["status"] = status;
  if (!message.empty()) j["message"] = message;
  Json q = Json::object();
  for (const auto& [k, v] : quantities) q[k] = number(v);
  j["quantities"] = q;
  Json checks_json = Json::array();
  for (const auto& c : checks)
    checks_json.push_back({{"quantity", c.quantity}, {"rule", c.rule}, {"value", number(c.value)}, {"pass", c.pass}});
  j["checks"] = checks_json;
  if (!extra.empty()) j["details"] = extra;
  Json rows = Json::array();
  for (const auto& r : table.rows) {
    Json row = Json::object();
    for (std::size_t c = 0; c < r.size() && c < table.columns.size(); ++c) row[table.columns[c]] = cell_json(r[c]);
    rows.push_back(row);
  }
  j["rows"] = rows;
  return j;
}

std::string csv_body(const Table& table) {
  std::string out;
  for (std::size_t c = 0; c < table.columns.size(); ++c) out += (c ? "," : "") + csv_quote(table.columns[c]);
  out += '\n';
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) out += (c ? "," : "") + format_cell(row[c]);
    out += '\n';
  }
  return out;
}

namespace {

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << content;
}

}  // namespace

void write_report(const std::filesystem::path& dir, const Report& report, const std::string& stamp) {
  write_file(dir / (report.name + ".csv"), "# " + stamp + "\n" + csv_body(report.table));
  write_file(dir / (report.name + ".json"), report.to_json().dump(2) + "\n");
  for (const auto& [file, content] : report.attachments) write_file(dir / file, content);
}

void write_summary(const std::filesystem::path& dir, const std::vector<Report>& reports, const std::string& stamp) {
  Table t;
  t.columns = {"scenario", "module", "operation", "subject", "status", "checks_passed", "checks_total", "anchor"};
  Json all = Json::array();
  for (const auto& r : reports) {
    long long passed = 0;
    for (const auto& c : r.checks) passed += c.pass ? 1 : 0;
    t.add({r.name, r.module, r.operation, r.subject, r.status, passed, static_cast<long long>(r.checks.size()),
           r.anchor});
    Json s;
    s["scenario"] = r.name;
    s["status"] = r.status;
    s["checks_passed"] = passed;
    s["checks_total"] = r.checks.size();
    if (!r.message.empty()) s["message"] = r.message;
    all.push_back(s);
  }
  write_file(dir / "summary.csv", "# " + stamp + "\n" + csv_body(t));
  Json j;
  j["generated"] = stamp;
  j["scenarios"] = all;
  write_file(dir / "summary.json", j.dump(2) + "\n");
}

}  // namespace shrinkerlab::cli
