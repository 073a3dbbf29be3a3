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

#include <cstdint>
#include <filesystem>
#include <numbers>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mildns/force.hpp"
#include "mildns/picard.hpp"

namespace mildns::experiments {

/// Raised for unreadable, malformed or invalid configuration files.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Scenario {
  scaling_invariance,
  small_data_global,
  blowup_sweep,
  decomposition_check,
  longtime_calderon,
  stability_perturbation,
  weak_strong_uniqueness,
  force_gallery,
};

std::span<const Scenario> all_scenarios();
std::string to_string(Scenario s);
Scenario scenario_from_string(const std::string& name);
std::string scenario_summary(Scenario s);

struct GridConfig {
  int n = 32;
  double box_length = 2.0 * std::numbers::pi;
};

/// Geometric time grid 0, t_first, ..., t_max (count points after 0).
struct TimeConfig {
  double t_max = 1.0;
  double t_first = 0.01;
  int count = 16;

  std::vector<double> build() const;
};

/// One summand of the initial data.
struct InitialDataConfig {
  /// random_banded | taylor_green | gaussian_bump
  std::string recipe = "random_banded";
  /// Tags a summand for scenarios that split the data (e.g. "bump").
  std::string role = "small";
  std::optional<std::uint64_t> seed;
  double k_lo = 1.0;
  double k_hi = 4.0;
  double slope = 0.0;
  double amplitude = 1.0;
  int k = 1;
  Vec3 direction{1.0, 0.0, 0.0};
  double width = 0.5;
  Vec3 center{};
  /// When set, the summand is rescaled to this ‖·‖_{Ḃ^{s_p}_{p,p}}.
  std::optional<double> besov_target;
  /// When set, the summand is rescaled to this L² norm.
  std::optional<double> l2_target;
};

struct ScenarioConfig {
  Scenario scenario = Scenario::small_data_global;
  std::uint64_t seed = 0;
  GridConfig grid;
  double p = 4.0;
  TimeConfig time;
  ForceSpec force;
  std::vector<InitialDataConfig> initial_data;
  SolverConfig solver;
  std::filesystem::path output_dir = "out";
  /// Scenario-specific options, see README.
  nlohmann::json params = nlohmann::json::object();
  /// Canonical dump of the parsed input, hashed into the manifest.
  std::string canonical_text;
};

/// Throws ConfigError on any schema or value problem.
ScenarioConfig parse_config(const nlohmann::json& j);
ScenarioConfig load_config(const std::filesystem::path& path);

ForceSpec parse_force(const nlohmann::json& j);
nlohmann::json force_to_json(const ForceSpec& f);

/// Sum of the summands whose role matches (all when role is empty).
SpectralField build_initial_data(std::span<const InitialDataConfig> parts,
                                 const Grid& grid, double p,
                                 std::uint64_t seed,
                                 const std::string& role = "");

/// Typed access to ScenarioConfig::params with defaults.
template <class T>
T param(const ScenarioConfig& cfg, const std::string& key, T fallback) {
  if (!cfg.params.contains(key)) return fallback;
  try {
    return cfg.params.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("scenario_params." + key + ": " + e.what());
  }
}

}  // namespace mildns::experiments
