// Copyright 2026 The geohydro Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "config.hpp"

namespace geohydro::cli {

enum ExitCode { kPass = 0, kCheckFailure = 1, kUsageError = 2 };

inline constexpr const char* kVersion = "0.1.0";

/// Names of the subcommands, in help order.
const std::vector<std::string>& commands();

struct RunOutcome {
  int exit_code = kPass;
  /// The JSON report that was written (also returned on check failures).
  nlohmann::ordered_json report;
  /// Files written, relative to the output directory.
  std::vector<std::string> files;
};

/// Runs one experiment with a fully merged config, writing its report files
/// into config "output". Throws ConfigError (and InvalidArgument) for bad input.
RunOutcome run_experiment(const std::string& command, const ExperimentConfig& config);

/// Full command-line entry point; returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace geohydro::cli
