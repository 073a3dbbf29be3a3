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

#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "mildns/force.hpp"
#include "mildns/picard.hpp"

namespace mildns {

/// Times on which the solver works: every interval of `times` split into
/// cfg.quadrature.substeps pieces. Duhamel integrals are then taken with one
/// piece per refined interval, so returned trajectories live on this grid.
std::vector<double> solver_times(std::span<const double> times,
                                 const SolverConfig& cfg);
/// Quadrature applied on the refined grid (one piece per interval).
QuadratureConfig solver_quadrature(const SolverConfig& cfg);

/// B on the refined grid with the solver's scheme.
BilinearMap ns_bilinear(const SolverConfig& cfg);

struct UfResult {
  Trajectory Uf;
  /// ∫_0^t e^{(t-s)Δ}Pf ds on the refined grid.
  Trajectory response;
  ConvergenceReport report;
  YNormReport y;
  /// sup_t ‖U_f(t)‖_{L^{3,∞}}.
  double sup_weak_l3 = 0.0;
  /// sup_t weak-L³(U_f) <= 2·y·(1 + tol); only meaningful when converged.
  bool bound_holds = false;
  bool budget_exceeded = false;
};

/// U_f: x = force_response(f) + B(x, x). `budget` bounds y_norm(f) (a warning
/// flag, not a refusal); `tol` loosens the 2‖f‖_Y bound check.
UfResult compute_Uf(ForceSpec& f, const Grid& grid,
                    std::span<const double> times, const SolverConfig& cfg,
                    double budget = 1e300, double tol = 0.1);

/// v = e^{tΔ}u0 + B(v, v) + 2B(U_f, v) on U_f's time grid. When U_f is
/// nonzero the linear part's norm λ is measured first (unless `constants`
/// are supplied) and the solve is refused if λ >= cfg.lambda_refusal.
FixedPointResult solve_perturbation(
    const SpectralField& u0, const Trajectory& Uf, const SolverConfig& cfg,
    std::optional<OperatorConstants> constants = {});

/// Estimated γ (and λ for a nonzero drift) on the given time grid.
OperatorConstants measure_constants(const Trajectory& Uf, const Trajectory& x1,
                                    const SolverConfig& cfg);

struct NsfResult {
  Trajectory uf;
  Trajectory Uf;
  Trajectory v;
  UfResult force_stage;
  ConvergenceReport perturbation_report;
  /// ‖u_f(t) - e^{tΔ}u0 - ∫e^{(t-s)Δ}Pf - B(u_f, u_f)(t)‖_{L²} /
  /// sup_s ‖u_f(s)‖_{L²} per time.
  std::vector<double> residuals;
  double max_residual = 0.0;
  bool converged = false;
  /// "force", "perturbation" or empty.
  std::string failed_stage;
};

NsfResult solve_nsf(const SpectralField& u0, ForceSpec& f, const Grid& grid,
                    std::span<const double> times, const SolverConfig& cfg);

/// Per-time relative residual of the mild equation for u_f.
std::vector<double> mild_residuals(const Trajectory& uf, const SpectralField& u0,
                                   const Trajectory& response,
                                   const SolverConfig& cfg);

struct BlowupReport {
  std::vector<double> horizons;
  /// Contraction norm of v on [0, T] (running max over horizons, including
  /// the last iterate of a failed solve).
  std::vector<double> growth;
  std::vector<std::string> statuses;
  bool flagged = false;
  double flag_horizon = 0.0;
  std::string flag_reason;
};

void to_json(nlohmann::json& j, const BlowupReport& r);

/// Solves the perturbation equation on each horizon T of `horizons`
/// (nested, increasing, each a member of `times`) and flags the first one
/// where the solve fails or ‖v‖ exceeds cfg.divergence_threshold. The sweep
/// stops at the first flag.
BlowupReport detect_blowup(const SpectralField& u0, const Trajectory& Uf_full,
                           std::span<const double> horizons,
                           const SolverConfig& cfg);

}  // namespace mildns
