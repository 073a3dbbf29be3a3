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
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "mildns/semigroup.hpp"

namespace mildns {

using LinearMap = std::function<Trajectory(const Trajectory&)>;
using BilinearMap =
    std::function<Trajectory(const Trajectory&, const Trajectory&)>;
using TrajectoryNorm = std::function<double(const Trajectory&)>;

struct SolverConfig {
  /// Integrability of the contraction norm; p > 3.
  double p = 4.0;
  int max_iters = 60;
  double rel_tol = 1e-9;
  double divergence_threshold = 1e3;
  QuadratureConfig quadrature{};
  /// Random samples for the γ/λ estimate; 0 skips the estimate.
  int constant_samples = 10;
  std::uint64_t seed = 1;
  /// Refuse the perturbation stage when the measured λ reaches this.
  double lambda_refusal = 0.95;
};

/// Throws unless p > 3, 2 < r₀ < 2p/(p - 3), rel_tol > 0, max_iters >= 1,
/// divergence_threshold > 0, constant_samples >= 0 and the quadrature is
/// valid.
void validate(const SolverConfig& cfg);

enum class SolveStatus { converged, diverged, max_iters, refused };
std::string to_string(SolveStatus s);

struct OperatorConstants {
  double gamma = 0.0;
  double lambda = 0.0;
};

struct ConvergenceReport {
  SolveStatus status = SolveStatus::max_iters;
  int iterations = 0;
  /// ‖x^{(n)}‖ for n = 1, 2, ...
  std::vector<double> iterate_norms;
  /// ‖x^{(n+1)} - x^{(n)}‖.
  std::vector<double> differences;
  /// differences[n] / differences[n-1].
  std::vector<double> ratios;
  double gamma_est = 0.0;
  double lambda_est = 0.0;
  double x1_norm = 0.0;
  double solution_norm = 0.0;
  /// ‖x - (x₁ + L(x) + B(x, x))‖ / ‖x‖ for the returned x.
  double residual = 0.0;
  /// ‖x₁‖ < (1-λ)²/(4γ).
  bool small_data_regime = false;
  /// 2γ‖x‖ <= 1.05·(1-λ), evaluated only in the small-data regime.
  bool small_data_bound_holds = false;
  double wall_seconds = 0.0;
  std::string message;
};

void to_json(nlohmann::json& j, const ConvergenceReport& r);

/// Contraction norm on [0, end_time] with the solver's p.
TrajectoryNorm contraction_norm_fn(double p);

/// Heat flows of random divergence-free banded fields on `times`; the
/// sampling corpus for γ and λ.
std::vector<Trajectory> operator_samples(const Grid& grid,
                                         std::span<const double> times,
                                         int count, std::uint64_t seed);

/// γ = max ‖B(x, y)‖/(‖x‖‖y‖) over the pairs (x_i, x_i) and (x_i, x_{i+1});
/// λ = max ‖L(x)‖/‖x‖ (0 when L is empty). Zero-norm samples are skipped.
OperatorConstants estimate_operator_constants(
    const LinearMap& L, const BilinearMap& B, const TrajectoryNorm& norm,
    std::span<const Trajectory> samples);

/// x = x₁ + L(x) + B(x, x) by Picard iteration from x^{(0)} = 0. An empty L
/// means L = 0. Iteration stops when the relative successive difference
/// drops below rel_tol and the recomputed residual is at most 10·rel_tol.
struct FixedPointResult {
  Trajectory solution;
  ConvergenceReport report;
};
FixedPointResult solve_fixed_point(const Trajectory& x1, const LinearMap& L,
                                   const BilinearMap& B,
                                   const TrajectoryNorm& norm,
                                   const SolverConfig& cfg,
                                   std::optional<OperatorConstants> constants = {});

}  // namespace mildns
