#pragma once

#include <yaml-cpp/yaml.h>

#include <optional>
#include <set>
#include <string>
#include <vector>

namespace shrinkerlab::cli {

/// Config problem found before any work starts; carries the config line.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& source, int line, const std::string& what)
      : std::runtime_error(source + ":" + std::to_string(line) + ": " + what) {}
};

/// Typed access to one YAML mapping. Every getter marks its key as used;
/// finish() rejects keys nobody asked for.
class Params {
 public:
  Params(YAML::Node node, std::string source);

  bool has(const std::string& key) const;
  double number(const std::string& key, std::optional<double> fallback = std::nullopt);
  long long integer(const std::string& key, std::optional<long long> fallback = std::nullopt);
  bool flag(const std::string& key, std::optional<bool> fallback = std::nullopt);
  std::string text(const std::string& key, std::optional<std::string> fallback = std::nullopt);
  std::vector<double> numbers(const std::string& key, std::optional<std::vector<double>> fallback = std::nullopt);
  std::vector<long long> integers(const std::string& key,
                                  std::optional<std::vector<long long>> fallback = std::nullopt);
  std::vector<std::string> texts(const std::string& key,
                                 std::optional<std::vector<std::string>> fallback = std::nullopt);

  /// Geometric sequence from {from, to, count}, or an explicit list.
  std::vector<double> grid(const std::string& key, std::optional<std::vector<double>> fallback = std::nullopt);

  /// Marks a key as handled elsewhere.
  void mark(const std::string& key) { used_.insert(key); }

  [[noreturn]] void fail(const std::string& key, const std::string& what) const;
  void finish() const;
  int line() const;
  const std::string& source() const { return source_; }

 private:
  YAML::Node lookup(const std::string& key);

  YAML::Node node_;
  std::string source_;
  std::set<std::string> used_;
};

}  // namespace shrinkerlab::cli
