// Copyright 2026 The geohydro Authors.
// SPDX-License-Identifier: Apache-2.0

#include "geohydro/report.hpp"

#include <cmath>

#include "geohydro/error.hpp"

namespace geohydro {

std::string to_string(NormKind kind) { return kind == NormKind::Sup ? "sup" : "L2"; }

nlohmann::ordered_json json_number(double x) {
  if (std::isfinite(x)) return x;
  if (std::isnan(x)) return "nan";
  return x > 0 ? "inf" : "-inf";
}

ResidualEntry& ResidualReport::add(std::string name, NormKind norm, double value,
                                   double tolerance, std::string definition) {
  ResidualEntry e;
  e.name = std::move(name);
  e.norm = norm;
  e.value = value;
  e.tolerance = tolerance;
  e.pass = value <= tolerance;
  e.definition = std::move(definition);
  entries_.push_back(std::move(e));
  return entries_.back();
}

void ResidualReport::add_metric(std::string name, double value, std::string definition) {
  if (!definition.empty()) metric_definitions_.emplace_back(name, std::move(definition));
  metrics_.emplace_back(std::move(name), value);
}

const ResidualEntry& ResidualReport::entry(const std::string& name) const {
  for (const auto& e : entries_)
    if (e.name == name) return e;
  throw InvalidArgument("report has no entry named " + name);
}

double ResidualReport::metric(const std::string& name) const {
  for (const auto& [n, v] : metrics_)
    if (n == name) return v;
  throw InvalidArgument("report has no metric named " + name);
}

bool ResidualReport::has_entry(const std::string& name) const {
  for (const auto& e : entries_)
    if (e.name == name) return true;
  return false;
}

bool ResidualReport::all_pass() const {
  for (const auto& e : entries_)
    if (!e.pass) return false;
  return true;
}

void ResidualReport::merge(const ResidualReport& other, const std::string& prefix) {
  for (auto e : other.entries_) {
    e.name = prefix + e.name;
    entries_.push_back(std::move(e));
  }
  for (const auto& [n, v] : other.metrics_) metrics_.emplace_back(prefix + n, v);
  for (const auto& [n, d] : other.metric_definitions_) metric_definitions_.emplace_back(prefix + n, d);
}

nlohmann::ordered_json ResidualReport::to_json() const {
  nlohmann::ordered_json j;
  j["title"] = title_;
  j["pass"] = all_pass();
  auto& list = j["entries"] = nlohmann::ordered_json::array();
  for (const auto& e : entries_) {
    nlohmann::ordered_json x;
    x["name"] = e.name;
    x["norm"] = to_string(e.norm);
    x["value"] = json_number(e.value);
    x["tolerance"] = json_number(e.tolerance);
    x["pass"] = e.pass;
    x["definition"] = e.definition;
    list.push_back(std::move(x));
  }
  auto& m = j["metrics"] = nlohmann::ordered_json::object();
  for (const auto& [n, v] : metrics_) m[n] = json_number(v);
  if (!metric_definitions_.empty()) {
    auto& d = j["metric_definitions"] = nlohmann::ordered_json::object();
    for (const auto& [n, text] : metric_definitions_) d[n] = text;
  }
  return j;
}

}  // namespace geohydro
