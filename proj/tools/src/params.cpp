#include "params.hpp"

#include <shrinkerlab/numerics.hpp>

#include <cmath>

namespace shrinkerlab::cli {

Params::Params(YAML::Node node, std::string source) : node_(std::move(node)), source_(std::move(source)) {
  if (node_ && !node_.IsNull() && !node_.IsMap()) throw ConfigError(source_, line(), "expected a mapping");
}

int Params::line() const { return node_ ? node_.Mark().line + 1 : 0; }

bool Params::has(const std::string& key) const { return node_ && node_.IsMap() && node_[key]; }

YAML::Node Params::lookup(const std::string& key) {
  used_.insert(key);
  if (!has(key)) return YAML::Node();
  return node_[key];
}

void Params::fail(const std::string& key, const std::string& what) const {
  int at = line();
  if (has(key)) at = node_[key].Mark().line + 1;
  throw ConfigError(source_, at, "'" + key + "': " + what);
}

namespace {

template <typename T>
T scalar(const Params& p, const YAML::Node& n, const std::string& key, const char* what) {
  if (!n.IsScalar()) p.fail(key, std::string("expected ") + what);
  try {
    return n.as<T>();
  } catch (const YAML::Exception&) {
    p.fail(key, std::string("expected ") + what);
  }
}

}  // namespace

double Params::number(const std::string& key, std::optional<double> fallback) {
  const auto n = lookup(key);
  if (!n || n.IsNull()) {
    if (!fallback) fail(key, "required number is missing");
    return *fallback;
  }
  const double v = scalar<double>(*this, n, key, "a number");
  if (!std::isfinite(v)) fail(key, "must be finite");
  return v;
}

long long Params::integer(const std::string& key, std::optional<long long> fallback) {
  const auto n = lookup(key);
  if (!n || n.IsNull()) {
    if (!fallback) fail(key, "required integer is missing");
    return *fallback;
  }
  return scalar<long long>(*this, n, key, "an integer");
}

bool Params::flag(const std::string& key, std::optional<bool> fallback) {
  const auto n = lookup(key);
  if (!n || n.IsNull()) {
    if (!fallback) fail(key, "required flag is missing");
    return *fallback;
  }
  return scalar<bool>(*this, n, key, "true or false");
}

std::string Params::text(const std::string& key, std::optional<std::string> fallback) {
  const auto n = lookup(key);
  if (!n || n.IsNull()) {
    if (!fallback) fail(key, "required value is missing");
    return *fallback;
  }
  return scalar<std::string>(*this, n, key, "a string");
}

std::vector<double> Params::numbers(const std::string& key, std::optional<std::vector<double>> fallback) {
  const auto n = lookup(key);
  if (!n || n.IsNull()) {
    if (!fallback) fail(key, "required list is missing");
    return *fallback;
  }
  if (n.IsScalar()) return {number(key)};
  if (!n.IsSequence() || n.size() == 0) fail(key, "expected a nonempty list of numbers");
  std::vector<double> out;
  for (const auto& item : n) {
    const double v = scalar<double>(*this, item, key, "numbers");
    if (!std::isfinite(v)) fail(key, "entries must be finite");
    out.push_back(v);
  }
  return out;
}

std::vector<long long> Params::integers(const std::string& key, std::optional<std::vector<long long>> fallback) {
  const auto n = lookup(key);
  if (!n || n.IsNull()) {
    if (!fallback) fail(key, "required list is missing");
    return *fallback;
  }
  if (n.IsScalar()) return {scalar<long long>(*this, n, key, "an integer")};
  if (!n.IsSequence() || n.size() == 0) fail(key, "expected a nonempty list of integers");
  std::vector<long long> out;
  for (const auto& item : n) out.push_back(scalar<long long>(*this, item, key, "integers"));
  return out;
}

std::vector<std::string> Params::texts(const std::string& key, std::optional<std::vector<std::string>> fallback) {
  const auto n = lookup(key);
  if (!n || n.IsNull()) {
    if (!fallback) fail(key, "required list is missing");
    return *fallback;
  }
  if (n.IsScalar()) return {scalar<std::string>(*this, n, key, "a string")};
  if (!n.IsSequence() || n.size() == 0) fail(key, "expected a nonempty list");
  std::vector<std::string> out;
  for (const auto& item : n) out.push_back(scalar<std::string>(*this, item, key, "strings"));
  return out;
}

std::vector<double> Params::grid(const std::string& key, std::optional<std::vector<double>> fallback) {
  const auto n = lookup(key);
  if (n && n.IsMap()) {
    Params g(n, source_);
    const double from = g.number("from");
    const double to = g.number("to");
    const long long count = g.integer("count");
    g.finish();
    if (!(from > 0.0) || !(to > from) || count < 2) fail(key, "grid needs 0 < from < to and count >= 2");
    return geometric_grid(from, to, static_cast<std::size_t>(count));
  }
  return numbers(key, std::move(fallback));
}

void Params::finish() const {
  if (!node_ || !node_.IsMap()) return;
  for (const auto& kv : node_) {
    const auto key = kv.first.as<std::string>();
    if (!used_.count(key)) throw ConfigError(source_, kv.first.Mark().line + 1, "unknown key '" + key + "'");
  }
}

}  // namespace shrinkerlab::cli
