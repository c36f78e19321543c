#pragma once

#include <nlohmann/json.hpp>

#include <filesystem>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace shrinkerlab::cli {

using Json = nlohmann::ordered_json;
using Cell = std::variant<double, long long, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add(std::vector<Cell> row) { rows.push_back(std::move(row)); }
};

/// %.15g for doubles, RFC 4180 quoting for text.
std::string format_cell(const Cell& cell);
std::string csv_quote(const std::string& text);

struct CheckResult {
  std::string quantity;
  std::string rule;  ///< e.g. "<= 1e-06" or "= 1 +- 1e-08"
  double value = 0.0;
  bool pass = false;
};

struct Report {
  std::string name;
  std::string module;
  std::string operation;
  std::string anchor;
  std::string subject;  ///< surface, moment or graph id
  Table table;
  std::vector<std::pair<std::string, double>> quantities;
  std::vector<CheckResult> checks;
  std::string status = "ok";  ///< ok, failed or error
  std::string message;
  Json extra = Json::object();
  /// Extra files written next to the report (file name, content).
  std::vector<std::pair<std::string, std::string>> attachments;

  double quantity(const std::string& key) const;
  Json to_json() const;
};

/// CSV body: header row plus rows, no timestamp line.
std::string csv_body(const Table& table);

/// Writes "<name>.csv" with a '#' timestamp line, "<name>.json" and the attachments.
void write_report(const std::filesystem::path& dir, const Report& report, const std::string& stamp);

/// summary.csv and summary.json across reports in the given order.
void write_summary(const std::filesystem::path& dir, const std::vector<Report>& reports, const std::string& stamp);

}  // namespace shrinkerlab::cli
