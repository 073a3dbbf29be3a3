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

#include "mildns/experiments/artifacts.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <openssl/evp.h>

#include "mildns/version.hpp"

namespace mildns::experiments {
namespace {

const std::set<std::string>& text_columns() {
  static const std::set<std::string> cols = {"status", "stage", "kind",
                                             "force_id", "uf_status",
                                             "norm_kind"};
  return cols;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

std::string join(const std::vector<std::string>& parts, char sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out.push_back(sep);
    out += parts[i];
  }
  return out;
}

}  // namespace

std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(),
                 nullptr) != 1) {
    throw std::runtime_error("sha256 failed");
  }
  static const char* hex = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(hex[digest[i] >> 4]);
    out.push_back(hex[digest[i] & 15]);
  }
  return out;
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

CsvTable::CsvTable(std::vector<std::string> columns)
    : columns_(std::move(columns)) {}

void CsvTable::add_row(std::vector<Cell> row) {
  if (row.size() != columns_.size()) {
    throw std::invalid_argument("csv: row has " + std::to_string(row.size()) +
                                " cells, expected " +
                                std::to_string(columns_.size()));
  }
  rows_.push_back(std::move(row));
}

std::string CsvTable::str() const {
  std::ostringstream out;
  out << join(columns_, ',') << '\n';
  for (const auto& row : rows_) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out << ',';
      std::visit(
          [&](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, double>) {
              out << format_number(v);
            } else {
              out << v;
            }
          },
          row[i]);
    }
    out << '\n';
  }
  return out.str();
}

const std::map<std::string, std::vector<std::string>>& csv_schemas() {
  static const std::map<std::string, std::vector<std::string>> schemas = {
      {"scaling.csv",
       {"field_id", "p", "besov_original", "besov_rescaled", "rel_gap"}},
      {"convergence.csv", {"stage", "iteration", "norm", "difference"}},
      {"timeseries.csv", {"t", "weak_l3", "besov_crit", "l2"}},
      {"blowup.csv", {"horizon", "growth", "status"}},
      {"decomposition.csv",
       {"N", "terms_H", "terms_W", "terms_Z", "residual", "H_besov",
        "WZ_weak_l3", "H_kato", "status"}},
      {"longtime.csv", {"t", "weakL3_uf", "L2_omega", "gronwall_bound"}},
      {"energy.csv",
       {"t", "omega_l2_sq", "cumulative_dissipation", "gronwall_bound"}},
      {"trilinear.csv", {"t", "trilinear", "dissipation_rate", "weak_l3_Uf"}},
      {"richardson.csv", {"substeps", "gap"}},
      {"stability.csv",
       {"delta_rel", "delta_besov", "diff_norm", "ratio", "status"}},
      {"force_gallery.csv",
       {"force_id", "kind", "width", "y_norm", "saturated", "uf_status",
        "sup_weak_l3_uf", "bound_holds"}},
      {"weakl3_series.csv", {"force_id", "t", "weak_l3"}},
      {"norms.csv", {"norm_kind", "s", "p", "q", "rho", "t1", "t2", "value"}},
  };
  return schemas;
}

std::string validate_csv(const std::string& file_name,
                         const std::string& content) {
  const auto& schemas = csv_schemas();
  const auto it = schemas.find(file_name);
  if (it == schemas.end()) return "no schema for " + file_name;
  const auto& cols = it->second;
  std::istringstream in(content);
  std::string line;
  if (!std::getline(in, line)) return "empty file";
  if (line != join(cols, ',')) return "header mismatch: '" + line + "'";
  long status_col = -1;
  for (std::size_t c = 0; c < cols.size(); ++c) {
    const auto& name = cols[c];
    if (name == "status" ||
        (name.size() > 7 && name.compare(name.size() - 7, 7, "_status") == 0)) {
      status_col = static_cast<long>(c);
    }
  }
  std::size_t row = 0;
  while (std::getline(in, line)) {
    ++row;
    const auto cells = split(line, ',');
    if (cells.size() != cols.size()) {
      return "row " + std::to_string(row) + ": wrong field count";
    }
    const bool flagged = status_col >= 0 && cells[status_col] != "ok";
    for (std::size_t c = 0; c < cols.size(); ++c) {
      if (text_columns().count(cols[c])) {
        if (cells[c].empty()) {
          return "row " + std::to_string(row) + ": empty " + cols[c];
        }
        continue;
      }
      double v = 0.0;
      const auto res =
          std::from_chars(cells[c].data(), cells[c].data() + cells[c].size(), v);
      const bool special = cells[c] == "nan" || cells[c] == "inf" || cells[c] == "-inf";
      if (cells[c] == "inf" && (cols[c] == "q" || cols[c] == "rho")) continue;
      if (special) {
        if (!flagged) {
          return "row " + std::to_string(row) + ": non-finite " + cols[c] +
                 " without a status flag";
        }
        continue;
      }
      if (res.ec != std::errc() || res.ptr != cells[c].data() + cells[c].size()) {
        return "row " + std::to_string(row) + ": '" + cells[c] +
               "' is not a number in " + cols[c];
      }
    }
  }
  return "";
}

RunArtifacts::RunArtifacts(const ScenarioConfig& cfg)
    : dir_(cfg.output_dir),
      scenario_(to_string(cfg.scenario)),
      seed_(cfg.seed),
      config_sha256_(sha256_hex(cfg.canonical_text)) {}

void RunArtifacts::ensure_dir() { std::filesystem::create_directories(dir_); }

void RunArtifacts::write_text(const std::string& name,
                              const std::string& content) {
  ensure_dir();
  std::ofstream out(dir_ / name, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + (dir_ / name).string());
  out << content;
  out.close();
  if (!out) throw std::runtime_error("write failed for " + name);
  for (auto& f : files_) {
    if (f.name == name) {
      f = {name, sha256_hex(content), content.size()};
      return;
    }
  }
  files_.push_back({name, sha256_hex(content), content.size()});
}

void RunArtifacts::write_json(const std::string& name, const nlohmann::json& j) {
  write_text(name, j.dump(2) + "\n");
}

void RunArtifacts::write_csv(const std::string& name, const CsvTable& table) {
  const std::string content = table.str();
  if (csv_schemas().count(name)) {
    const std::string problem = validate_csv(name, content);
    if (!problem.empty()) {
      throw std::logic_error("csv " + name + " violates its schema: " + problem);
    }
  }
  write_text(name, content);
}

void RunArtifacts::stage(const std::string& name, const std::string& status,
                         double wall_seconds, const std::string& message) {
  stages_.push_back({name, status, wall_seconds, message});
}

nlohmann::json RunArtifacts::manifest(int exit_code) const {
  nlohmann::json files = nlohmann::json::array();
  for (const auto& f : files_) {
    files.push_back({{"name", f.name}, {"sha256", f.sha256}, {"bytes", f.bytes}});
  }
  nlohmann::json stages = nlohmann::json::array();
  double total = 0.0;
  for (const auto& s : stages_) {
    stages.push_back({{"name", s.name},
                      {"status", s.status},
                      {"wall_seconds", s.wall_seconds},
                      {"message", s.message}});
    total += s.wall_seconds;
  }
  return {{"scenario", scenario_},
          {"seed", seed_},
          {"config_sha256", config_sha256_},
          {"code_version", std::string(kVersion)},
          {"exit_code", exit_code},
          {"complete", exit_code == 0},
          {"wall_seconds_total", total},
          {"stages", stages},
          {"files", files}};
}

void RunArtifacts::write_manifest(int exit_code) {
  ensure_dir();
  std::ofstream out(dir_ / "manifest.json");
  if (!out) throw std::runtime_error("cannot write manifest");
  out << manifest(exit_code).dump(2) << "\n";
}

}  // namespace mildns::experiments
