// Copyright 2026 The mildns Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <nlohmann/json.hpp>

#include "mildns/experiments/config.hpp"

namespace mildns::experiments {

/// Process exit codes of a scenario run.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitNonConvergence = 2;

struct RunOutcome {
  int exit_code = kExitOk;
  /// Contents of report.json.
  nlohmann::json report;
};

/// Checks the scenario-specific parameters without running anything.
/// Throws ConfigError.
void validate_scenario(const ScenarioConfig& cfg);

/// Runs the configured scenario and writes its artifacts (always including
/// manifest.json) into cfg.output_dir. Parameter problems are reported as
/// ConfigError before any file is written.
RunOutcome run_scenario(const ScenarioConfig& cfg);

}  // namespace mildns::experiments
