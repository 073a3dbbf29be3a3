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
#include <map>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "mildns/experiments/config.hpp"

namespace mildns::experiments {

std::string sha256_hex(std::string_view data);

/// Shortest round-trip decimal for finite values; "nan", "inf", "-inf"
/// otherwise.
std::string format_number(double v);

class CsvTable {
 public:
  using Cell = std::variant<double, std::int64_t, std::string>;

  explicit CsvTable(std::vector<std::string> columns);

  const std::vector<std::string>& columns() const { return columns_; }
  std::size_t rows() const { return rows_.size(); }
  void add_row(std::vector<Cell> row);
  std::string str() const;

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<Cell>> rows_;
};

/// Column sets of every CSV the scenarios emit, keyed by file name.
///
///   scaling.csv         field_id,p,besov_original,besov_rescaled,rel_gap
///   convergence.csv     stage,iteration,norm,difference
///   timeseries.csv      t,weak_l3,besov_crit,l2
///   blowup.csv          horizon,growth,status
///   decomposition.csv   N,terms_H,terms_W,terms_Z,residual,H_besov,
///                       WZ_weak_l3,H_kato,status
///   longtime.csv        t,weakL3_uf,L2_omega,gronwall_bound
///   energy.csv          t,omega_l2_sq,cumulative_dissipation,gronwall_bound
///   trilinear.csv       t,trilinear,dissipation_rate,weak_l3_Uf
///   richardson.csv      substeps,gap
///   stability.csv       delta_rel,delta_besov,diff_norm,ratio,status
///   force_gallery.csv   force_id,kind,width,y_norm,saturated,uf_status,
///                       sup_weak_l3_uf,bound_holds
///   weakl3_series.csv   force_id,t,weak_l3
///   norms.csv           norm_kind,s,p,q,rho,t1,t2,value
///
/// Columns named status, stage, kind, force_id, uf_status and norm_kind hold
/// text; the rest are numbers. NaN or infinite values are only allowed in
/// rows whose status (or *_status) column is present and differs from "ok";
/// the exponent columns q and rho may hold "inf".
const std::map<std::string, std::vector<std::string>>& csv_schemas();

/// Checks header, field counts and cell types against csv_schemas().
/// Returns an empty string when valid, else a description of the problem.
std::string validate_csv(const std::string& file_name, const std::string& content);

/// Output directory of one run: files with checksums, stage statuses and
/// the manifest.
class RunArtifacts {
 public:
  explicit RunArtifacts(const ScenarioConfig& cfg);

  const std::filesystem::path& dir() const { return dir_; }

  void write_text(const std::string& name, const std::string& content);
  void write_json(const std::string& name, const nlohmann::json& j);
  /// Validates registered file names against their schema before writing.
  void write_csv(const std::string& name, const CsvTable& table);

  void stage(const std::string& name, const std::string& status,
             double wall_seconds, const std::string& message = "");

  nlohmann::json manifest(int exit_code) const;
  /// Writes manifest.json; it is not listed in its own inventory.
  void write_manifest(int exit_code);

 private:
  struct FileRecord {
    std::string name;
    std::string sha256;
    std::size_t bytes;
  };
  struct StageRecord {
    std::string name;
    std::string status;
    double wall_seconds;
    std::string message;
  };

  void ensure_dir();

  std::filesystem::path dir_;
  std::string scenario_;
  std::uint64_t seed_;
  std::string config_sha256_;
  std::vector<FileRecord> files_;
  std::vector<StageRecord> stages_;
};

}  // namespace mildns::experiments
