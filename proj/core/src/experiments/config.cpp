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

#include "mildns/experiments/config.hpp"

#include <array>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "mildns/fields.hpp"
#include "mildns/norms.hpp"

namespace mildns::experiments {
namespace {

using nlohmann::json;

constexpr std::array<Scenario, 8> kScenarios = {
    Scenario::scaling_invariance,    Scenario::small_data_global,
    Scenario::blowup_sweep,          Scenario::decomposition_check,
    Scenario::longtime_calderon,     Scenario::stability_perturbation,
    Scenario::weak_strong_uniqueness, Scenario::force_gallery,
};

void check_keys(const json& j, const std::string& where,
                std::initializer_list<const char*> allowed) {
  if (!j.is_object()) throw ConfigError(where + ": expected an object");
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [key, value] : j.items()) {
    if (!ok.count(key)) throw ConfigError(where + ": unknown key '" + key + "'");
  }
}

template <class T>
T get_or(const json& j, const std::string& where, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(where + "." + key + ": wrong type");
  }
}

double get_length(const json& j, const std::string& where, const char* key,
                  double fallback) {
  if (!j.contains(key)) return fallback;
  const json& v = j.at(key);
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    // "2pi", "16pi", "pi"
    std::string s = v.get<std::string>();
    if (s.size() >= 2 && s.substr(s.size() - 2) == "pi") {
      const std::string head = s.substr(0, s.size() - 2);
      try {
        const double f = head.empty() ? 1.0 : std::stod(head);
        return f * std::numbers::pi;
      } catch (const std::exception&) {
      }
    }
  }
  throw ConfigError(where + "." + key + ": expected a number or '<k>pi'");
}

Vec3 get_vec3(const json& j, const std::string& where, const char* key,
              Vec3 fallback) {
  if (!j.contains(key)) return fallback;
  const json& v = j.at(key);
  if (!v.is_array() || v.size() != 3) {
    throw ConfigError(where + "." + key + ": expected 3 numbers");
  }
  Vec3 out;
  for (int i = 0; i < 3; ++i) {
    if (!v[i].is_number()) throw ConfigError(where + "." + key + ": expected numbers");
    out[i] = v[i].get<double>();
  }
  return out;
}

void require(bool ok, const std::string& message) {
  if (!ok) throw ConfigError(message);
}

InitialDataConfig parse_initial(const json& j, const std::string& where) {
  check_keys(j, where,
             {"recipe", "role", "seed", "k_lo", "k_hi", "slope", "amplitude",
              "k", "direction", "width", "center", "besov_target", "l2_target"});
  InitialDataConfig c;
  c.recipe = get_or<std::string>(j, where, "recipe", c.recipe);
  require(c.recipe == "random_banded" || c.recipe == "taylor_green" ||
              c.recipe == "gaussian_bump",
          where + ".recipe: unknown recipe '" + c.recipe + "'");
  c.role = get_or<std::string>(j, where, "role", c.role);
  if (j.contains("seed")) c.seed = get_or<std::uint64_t>(j, where, "seed", 0);
  c.k_lo = get_or(j, where, "k_lo", c.k_lo);
  c.k_hi = get_or(j, where, "k_hi", c.k_hi);
  c.slope = get_or(j, where, "slope", c.slope);
  c.amplitude = get_or(j, where, "amplitude", c.amplitude);
  c.k = get_or(j, where, "k", c.k);
  c.direction = get_vec3(j, where, "direction", c.direction);
  c.width = get_or(j, where, "width", c.width);
  c.center = get_vec3(j, where, "center", c.center);
  if (j.contains("besov_target")) {
    c.besov_target = get_or<double>(j, where, "besov_target", 0.0);
    require(*c.besov_target >= 0.0, where + ".besov_target must be >= 0");
  }
  if (j.contains("l2_target")) {
    c.l2_target = get_or<double>(j, where, "l2_target", 0.0);
    require(*c.l2_target >= 0.0, where + ".l2_target must be >= 0");
  }
  require(!(c.besov_target && c.l2_target),
          where + ": besov_target and l2_target are exclusive");
  require(c.k_lo >= 0.0 && c.k_hi >= c.k_lo, where + ": need 0 <= k_lo <= k_hi");
  require(c.width > 0.0, where + ".width must be > 0");
  require(c.k >= 1, where + ".k must be >= 1");
  return c;
}

SolverConfig parse_solver(const json& j, double p, std::uint64_t seed) {
  const std::string where = "solver";
  check_keys(j, where,
             {"max_iters", "rel_tol", "divergence_threshold", "substeps",
              "scheme", "constant_samples", "lambda_refusal"});
  SolverConfig s;
  s.p = p;
  s.seed = seed;
  s.max_iters = get_or(j, where, "max_iters", s.max_iters);
  s.rel_tol = get_or(j, where, "rel_tol", s.rel_tol);
  s.divergence_threshold =
      get_or(j, where, "divergence_threshold", s.divergence_threshold);
  s.quadrature.substeps = get_or(j, where, "substeps", s.quadrature.substeps);
  const auto scheme =
      get_or<std::string>(j, where, "scheme", "integrating_factor_trapezoid");
  if (scheme == "integrating_factor_trapezoid") {
    s.quadrature.scheme = QuadratureScheme::integrating_factor_trapezoid;
  } else if (scheme == "integrating_factor_midpoint") {
    s.quadrature.scheme = QuadratureScheme::integrating_factor_midpoint;
  } else {
    throw ConfigError("solver.scheme: unknown scheme '" + scheme + "'");
  }
  s.constant_samples = get_or(j, where, "constant_samples", s.constant_samples);
  s.lambda_refusal = get_or(j, where, "lambda_refusal", s.lambda_refusal);
  try {
    validate(s);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return s;
}

}  // namespace

std::span<const Scenario> all_scenarios() { return kScenarios; }

std::string to_string(Scenario s) {
  switch (s) {
    case Scenario::scaling_invariance: return "scaling_invariance";
    case Scenario::small_data_global: return "small_data_global";
    case Scenario::blowup_sweep: return "blowup_sweep";
    case Scenario::decomposition_check: return "decomposition_check";
    case Scenario::longtime_calderon: return "longtime_calderon";
    case Scenario::stability_perturbation: return "stability_perturbation";
    case Scenario::weak_strong_uniqueness: return "weak_strong_uniqueness";
    case Scenario::force_gallery: return "force_gallery";
  }
  return "unknown";
}

Scenario scenario_from_string(const std::string& name) {
  for (Scenario s : kScenarios) {
    if (to_string(s) == name) return s;
  }
  throw ConfigError("unknown scenario '" + name + "'");
}

std::string scenario_summary(Scenario s) {
  switch (s) {
    case Scenario::scaling_invariance:
      return "critical Besov norm before and after the dilation u -> 2u(2x)";
    case Scenario::small_data_global:
      return "Picard solve of small data with measured gamma/lambda";
    case Scenario::blowup_sweep:
      return "nested-horizon solves of large data, growth curve and flag";
    case Scenario::decomposition_check:
      return "v = H_N + W_N + Z_N evaluated against a converged solve";
    case Scenario::longtime_calderon:
      return "small + finite-energy data split, weak-L3 and energy over time";
    case Scenario::stability_perturbation:
      return "difference/perturbation ratios for shrinking perturbations";
    case Scenario::weak_strong_uniqueness:
      return "two solution paths, energy of the difference, Richardson slope";
    case Scenario::force_gallery:
      return "Y-norm, U_f solve and 2||f||_Y bound for a set of forces";
  }
  return "";
}

std::vector<double> TimeConfig::build() const {
  try {
    return geometric_times(t_first, t_max, count);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("time: ") + e.what());
  }
}

ForceSpec parse_force(const json& j) {
  const std::string where = "force";
  check_keys(j, where,
             {"kind", "amplitude", "width", "center", "direction", "modes"});
  ForceSpec f;
  try {
    f.kind = force_kind_from_string(get_or<std::string>(j, where, "kind", "zero"));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("force.kind: ") + e.what());
  }
  f.amplitude = get_or(j, where, "amplitude", f.amplitude);
  f.width = get_or(j, where, "width", f.width);
  f.center = get_vec3(j, where, "center", f.center);
  f.direction = get_vec3(j, where, "direction", f.direction);
  require(f.width > 0.0, "force.width must be > 0");
  if (j.contains("modes")) {
    const json& modes = j.at("modes");
    require(modes.is_array(), "force.modes: expected an array");
    for (std::size_t i = 0; i < modes.size(); ++i) {
      const std::string w = "force.modes[" + std::to_string(i) + "]";
      check_keys(modes[i], w, {"m", "cos", "sin"});
      const Vec3 m = get_vec3(modes[i], w, "m", {0, 0, 0});
      ForceMode fm;
      fm.m = {static_cast<int>(m[0]), static_cast<int>(m[1]),
              static_cast<int>(m[2])};
      require(fm.m.x == m[0] && fm.m.y == m[1] && fm.m.z == m[2],
              w + ".m: expected integers");
      require(!(fm.m == ModeIndex{}), w + ".m: the zero mode is not allowed");
      fm.cos_amp = get_vec3(modes[i], w, "cos", {0, 0, 0});
      fm.sin_amp = get_vec3(modes[i], w, "sin", {0, 0, 0});
      f.modes.push_back(fm);
    }
  }
  require(f.kind != ForceKind::time_independent_mode_sum || !f.modes.empty(),
          "force.modes: required for time_independent_mode_sum");
  return f;
}

json force_to_json(const ForceSpec& f) {
  json modes = json::array();
  for (const auto& m : f.modes) {
    modes.push_back({{"m", {m.m.x, m.m.y, m.m.z}},
                     {"cos", m.cos_amp},
                     {"sin", m.sin_amp}});
  }
  return {{"kind", to_string(f.kind)}, {"amplitude", f.amplitude},
          {"width", f.width},          {"center", f.center},
          {"direction", f.direction},  {"modes", modes}};
}

ScenarioConfig parse_config(const json& j) {
  check_keys(j, "config",
             {"scenario", "seed", "grid", "p", "time", "force", "initial_data",
              "solver", "output_dir", "scenario_params"});
  ScenarioConfig c;
  require(j.contains("scenario"), "config: 'scenario' is required");
  c.scenario = scenario_from_string(get_or<std::string>(j, "config", "scenario", ""));
  require(j.contains("seed"), "config: 'seed' is required");
  c.seed = get_or<std::uint64_t>(j, "config", "seed", 0);

  if (j.contains("grid")) {
    check_keys(j.at("grid"), "grid", {"n", "box_length"});
    c.grid.n = get_or(j.at("grid"), "grid", "n", c.grid.n);
    c.grid.box_length =
        get_length(j.at("grid"), "grid", "box_length", c.grid.box_length);
  }
  try {
    (void)make_grid(c.grid.n, c.grid.box_length);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("grid: ") + e.what());
  }

  c.p = get_or(j, "config", "p", c.p);
  require(c.p > 3.0 && std::isfinite(c.p), "config.p must be finite and > 3");

  if (j.contains("time")) {
    const json& t = j.at("time");
    check_keys(t, "time", {"kind", "t_max", "t_first", "count"});
    const auto kind = get_or<std::string>(t, "time", "kind", "geometric");
    // Kato and Chemin-Lerner weights vary fastest near t = 0.
    require(kind == "geometric", "time.kind: only 'geometric' grids are accepted");
    c.time.t_max = get_or(t, "time", "t_max", c.time.t_max);
    c.time.t_first = get_or(t, "time", "t_first", c.time.t_first);
    c.time.count = get_or(t, "time", "count", c.time.count);
  }
  (void)c.time.build();

  if (j.contains("force")) c.force = parse_force(j.at("force"));

  if (j.contains("initial_data")) {
    const json& parts = j.at("initial_data");
    require(parts.is_array(), "initial_data: expected an array");
    for (std::size_t i = 0; i < parts.size(); ++i) {
      c.initial_data.push_back(
          parse_initial(parts[i], "initial_data[" + std::to_string(i) + "]"));
    }
  }

  c.solver = parse_solver(j.value("solver", json::object()), c.p, c.seed);
  c.output_dir = get_or<std::string>(j, "config", "output_dir", "out");
  if (j.contains("scenario_params")) {
    require(j.at("scenario_params").is_object(),
            "scenario_params: expected an object");
    c.params = j.at("scenario_params");
  }
  c.canonical_text = j.dump();
  return c;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  return parse_config(j);
}

SpectralField build_initial_data(std::span<const InitialDataConfig> parts,
                                 const Grid& grid, double p,
                                 std::uint64_t seed, const std::string& role) {
  SpectralField total(grid);
  total.set_divergence_free(true);
  std::uint64_t index = 0;
  for (const auto& c : parts) {
    ++index;
    if (!role.empty() && c.role != role) continue;
    SpectralField u(grid);
    if (c.recipe == "random_banded") {
      u = random_banded_field(grid, c.seed.value_or(seed + 1000003u * index),
                              c.k_lo, c.k_hi, c.slope);
      u *= c.amplitude;
    } else if (c.recipe == "taylor_green") {
      u = taylor_green_field(grid, c.amplitude, c.k);
    } else {
      u = gaussian_bump_field(grid, c.direction, c.width, c.center);
      u *= c.amplitude;
    }
    if (c.besov_target) {
      const double b = besov_norm(u, BesovIndex::critical(p, p));
      if (b > 0.0) u *= *c.besov_target / b;
    } else if (c.l2_target) {
      const double e = u.l2_norm();
      if (e > 0.0) u *= *c.l2_target / e;
    }
    total += u;
  }
  total.set_divergence_free(true);
  return total;
}

}  // namespace mildns::experiments
