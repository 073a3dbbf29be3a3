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

#include <gtest/gtest.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>

#include <sys/wait.h>

#include <nlohmann/json.hpp>

#include "mildns/experiments/artifacts.hpp"
#include "test_support.hpp"

namespace fs = std::filesystem;
using mildns::experiments::sha256_hex;
using mildns::experiments::validate_csv;
using mildns::testing::read_file;
using nlohmann::json;

namespace {

struct Result {
  int code;
  std::string out;
};

Result cli(const std::string& args) {
  const std::string cmd = std::string(MILDNS_CLI) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return {-1, ""};
  std::string out;
  std::array<char, 4096> buf{};
  while (std::size_t n = std::fread(buf.data(), 1, buf.size(), pipe)) out.append(buf.data(), n);
  const int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("mildns_cli_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

fs::path write_config(const fs::path& dir, const std::string& name, const json& j) {
  const fs::path p = dir / name;
  std::ofstream(p) << j.dump(2);
  return p;
}

json small_scaling(const fs::path& out) {
  return {{"scenario", "scaling_invariance"},
          {"seed", 5},
          {"grid", {{"n", 16}, {"box_length", "2pi"}}},
          {"p", 4},
          {"time", {{"kind", "geometric"}, {"t_max", 0.5}, {"t_first", 0.01}, {"count", 4}}},
          {"initial_data", {{{"recipe", "random_banded"}, {"k_lo", 1}, {"k_hi", 4}}}},
          {"scenario_params", {{"fields", 3}, {"k_hi", 4}}},
          {"output_dir", out.string()}};
}

}  // namespace

TEST(Cli, ListsEveryScenario) {
  const Result r = cli("list-scenarios");
  EXPECT_EQ(r.code, 0);
  for (const char* name : {"scaling_invariance", "small_data_global", "blowup_sweep",
                           "decomposition_check", "longtime_calderon", "stability_perturbation",
                           "weak_strong_uniqueness", "force_gallery"}) {
    EXPECT_NE(r.out.find(name), std::string::npos) << name;
  }
}

TEST(Cli, DumpTermsMatchesGolden) {
  const Result r = cli("dump-terms --N 3");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, read_file(std::string(MILDNS_TEST_DATA_DIR) + "/expand_N3.txt"));
  EXPECT_EQ(cli("dump-terms --N 7").code, 1);
  EXPECT_EQ(cli("dump-terms --N 1").code, 1);
  EXPECT_EQ(cli("dump-terms").code, 1);
}

TEST(Cli, BadConfigsExitOneWithoutOutput) {
  const fs::path dir = scratch("bad");
  const fs::path out = dir / "out";

  const fs::path malformed = dir / "malformed.json";
  std::ofstream(malformed) << "{ \"scenario\": ";
  EXPECT_EQ(cli("run " + malformed.string()).code, 1);
  EXPECT_EQ(cli("validate " + malformed.string()).code, 1);

  json j = small_scaling(out);
  j["grid"]["n"] = 9;
  EXPECT_EQ(cli("run " + write_config(dir, "odd.json", j).string()).code, 1);

  j = small_scaling(out);
  j["scenario_params"]["no_such_param"] = 1;
  EXPECT_EQ(cli("run " + write_config(dir, "param.json", j).string()).code, 1);

  EXPECT_EQ(cli("run " + (dir / "missing.json").string()).code, 1);
  EXPECT_EQ(cli("frobnicate").code, 1);
  EXPECT_FALSE(fs::exists(out));

  EXPECT_EQ(cli("validate " + write_config(dir, "ok.json", small_scaling(out)).string()).code, 0);
  EXPECT_FALSE(fs::exists(out));
  fs::remove_all(dir);
}

TEST(Cli, RunsAreReproducibleAndSchemaValid) {
  const fs::path dir = scratch("repro");
  std::array<json, 2> manifests;
  for (int k = 0; k < 2; ++k) {
    const fs::path out = dir / ("run" + std::to_string(k));
    const fs::path cfg = write_config(dir, "cfg" + std::to_string(k) + ".json", small_scaling(out));
    const Result r = cli("run " + cfg.string());
    ASSERT_EQ(r.code, 0) << r.out;
    EXPECT_TRUE(json::parse(r.out).value("passed", false));
    manifests[k] = json::parse(read_file((out / "manifest.json").string()));
    for (const auto& f : manifests[k].at("files")) {
      const std::string name = f.at("name");
      const std::string body = read_file((out / name).string());
      EXPECT_EQ(f.at("sha256"), sha256_hex(body)) << name;
      if (name.ends_with(".csv")) EXPECT_EQ(validate_csv(name, body), "") << name;
    }
  }
  // Output dirs differ, so the config hash differs; the CSV checksums must not.
  auto csv_sums = [](const json& m) {
    std::map<std::string, std::string> s;
    for (const auto& f : m.at("files")) {
      const std::string name = f.at("name");
      if (name.ends_with(".csv")) s[name] = f.at("sha256");
    }
    return s;
  };
  EXPECT_FALSE(csv_sums(manifests[0]).empty());
  EXPECT_EQ(csv_sums(manifests[0]), csv_sums(manifests[1]));
  fs::remove_all(dir);
}

TEST(Cli, ThreadCountFromEnvironment) {
  const fs::path dir = scratch("threads");
  const fs::path out = dir / "out";
  const fs::path cfg = write_config(dir, "cfg.json", small_scaling(out));
  const std::string cmd = "MILDNS_THREADS=2 " + std::string(MILDNS_CLI) + " run " + cfg.string() +
                          " >/dev/null 2>&1";
  ASSERT_EQ(std::system(cmd.c_str()), 0);
  EXPECT_EQ(validate_csv("scaling.csv", read_file((out / "scaling.csv").string())), "");
  fs::remove_all(dir);
}

// Fixtures consumed by the plotting tool; they must keep matching the
// documented schemas.
TEST(FigureFixtures, LongtimeCsvMatchesSchema) {
  const std::string body = read_file(std::string(MILDNS_TEST_DATA_DIR) + "/longtime.csv");
  ASSERT_FALSE(body.empty());
  EXPECT_EQ(validate_csv("longtime.csv", body), "");
  EXPECT_NE(validate_csv("longtime.csv", "t,weakL3_uf\n0,1\n"), "");
}

TEST(FigureFixtures, ConvergenceJsonMatchesReportShape) {
  const json j =
      json::parse(read_file(std::string(MILDNS_TEST_DATA_DIR) + "/convergence.json"));
  EXPECT_EQ(j.at("config_sha256").get<std::string>().size(), 64u);
  const json& c = j.at("convergence");
  for (const char* key : {"status", "iterations", "iterate_norms", "differences", "ratios",
                          "residual", "gamma_est", "lambda_est", "x1_norm"}) {
    EXPECT_TRUE(c.contains(key)) << key;
  }
  EXPECT_EQ(c.at("status"), "converged");
  EXPECT_LT(c.at("ratios").size(), c.at("differences").size());
}
