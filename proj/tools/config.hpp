// Copyright 2026 The geohydro Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "geohydro/error.hpp"

namespace geohydro::cli {

/// Unknown key, duplicate key, malformed line or unparsable value.
class ConfigError : public Error {
 public:
  using Error::Error;
};

struct KeyInfo {
  const char* key;
  const char* help;
};

/// Every accepted key with a one-line description.
const std::vector<KeyInfo>& known_keys();

/// Key = value experiment configuration. Values are kept as text so that
/// parse(serialize(c)) == c exactly; typed accessors evaluate them on demand
/// (numbers may be constant expressions such as "pi/6").
///
///   # comment (everything after '#' on a line is ignored)
///   chart.kind = sphere_band
///   chart.theta_min = pi/6
class ExperimentConfig {
 public:
  static ExperimentConfig parse(std::string_view text);
  /// Reads a file; a relative chart.file is rebased onto the file's directory.
  static ExperimentConfig load(const std::filesystem::path& path);

  std::string serialize() const;

  /// Validates the key; overwrites an existing value.
  void set(const std::string& key, const std::string& value);
  bool has(const std::string& key) const { return values_.count(key) != 0; }
  void erase(const std::string& key) { values_.erase(key); }

  std::string text(const std::string& key, const std::string& fallback = {}) const;
  double number(const std::string& key, double fallback) const;
  int integer(const std::string& key, int fallback) const;
  bool flag(const std::string& key, bool fallback) const;
  /// Required: throws ConfigError when absent.
  std::uint64_t seed() const;
  /// Comma- or space-separated list.
  std::vector<std::string> list(const std::string& key) const;

  const std::map<std::string, std::string>& values() const { return values_; }
  bool operator==(const ExperimentConfig&) const = default;

 private:
  std::map<std::string, std::string> values_;
};

}  // namespace geohydro::cli
