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

#include <cstdlib>
#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "mildns/expansion.hpp"
#include "mildns/experiments/config.hpp"
#include "mildns/experiments/scenarios.hpp"
#include "mildns/fft.hpp"
#include "mildns/version.hpp"

namespace ex = mildns::experiments;

namespace {

int do_run(const std::string& path) {
  ex::ScenarioConfig cfg;
  try {
    cfg = ex::load_config(path);
    ex::validate_scenario(cfg);
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return ex::kExitConfig;
  }
  const auto outcome = ex::run_scenario(cfg);
  std::cout << outcome.report.dump(2) << "\n";
  if (outcome.exit_code != ex::kExitOk) {
    std::cerr << "run finished with exit code " << outcome.exit_code << "\n";
  }
  return outcome.exit_code;
}

int do_validate(const std::string& path) {
  try {
    const auto cfg = ex::load_config(path);
    ex::validate_scenario(cfg);
    std::cout << "ok: " << ex::to_string(cfg.scenario) << "\n";
    return ex::kExitOk;
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return ex::kExitConfig;
  }
}

int do_list() {
  for (auto s : ex::all_scenarios()) {
    std::cout << ex::to_string(s) << "\t" << ex::scenario_summary(s) << "\n";
  }
  return ex::kExitOk;
}

int do_dump(int N) {
  try {
    std::cout << mildns::dump_terms(mildns::expand(N));
    return ex::kExitOk;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return ex::kExitConfig;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mild-solution pseudo-spectral lab for forced Navier-Stokes"};
  app.set_version_flag("--version", std::string(mildns::kVersion));
  app.require_subcommand(1);

  std::string run_path;
  auto* run = app.add_subcommand("run", "Run the scenario described by a config file");
  run->add_option("config", run_path, "Config file (JSON)")->required();

  std::string validate_path;
  auto* validate =
      app.add_subcommand("validate", "Parse and check a config file without running");
  validate->add_option("config", validate_path, "Config file (JSON)")->required();

  auto* list = app.add_subcommand("list-scenarios", "List the available scenarios");

  int order = 3;
  auto* dump = app.add_subcommand("dump-terms", "Print the H/W/Z term lists of expand(N)");
  dump->add_option("--N", order, "Expansion order")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : ex::kExitConfig;
  }

  mildns::configure_fft_threads();
  if (*run) return do_run(run_path);
  if (*validate) return do_validate(validate_path);
  if (*list) return do_list();
  if (*dump) return do_dump(order);
  return ex::kExitConfig;
}
