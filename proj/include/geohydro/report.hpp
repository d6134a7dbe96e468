// Copyright 2026 The geohydro Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <limits>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace geohydro {

enum class NormKind { Sup, L2 };

std::string to_string(NormKind kind);

struct ResidualEntry {
  std::string name;
  NormKind norm = NormKind::Sup;
  double value = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::string definition;
};

/// Named residual norms with tolerances. An entry passes iff value <= tolerance
/// (NaN never passes). Informational metrics carry no verdict.
class ResidualReport {
 public:
  ResidualReport() = default;
  explicit ResidualReport(std::string title) : title_(std::move(title)) {}

  ResidualEntry& add(std::string name, NormKind norm, double value, double tolerance,
                     std::string definition);
  void add_metric(std::string name, double value, std::string definition = {});

  const std::string& title() const { return title_; }
  const std::vector<ResidualEntry>& entries() const { return entries_; }
  const std::vector<std::pair<std::string, double>>& metrics() const { return metrics_; }

  /// Throws InvalidArgument when the name is unknown.
  const ResidualEntry& entry(const std::string& name) const;
  double metric(const std::string& name) const;
  bool has_entry(const std::string& name) const;

  bool all_pass() const;

  /// Appends another report's entries with a name prefix.
  void merge(const ResidualReport& other, const std::string& prefix);

  nlohmann::ordered_json to_json() const;

 private:
  std::string title_;
  std::vector<ResidualEntry> entries_;
  std::vector<std::pair<std::string, double>> metrics_;
  std::vector<std::pair<std::string, std::string>> metric_definitions_;
};

/// Serializes doubles so that non-finite values survive as strings.
nlohmann::ordered_json json_number(double x);

}  // namespace geohydro
