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

#include "mildns/nsf.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "mildns/norms.hpp"

namespace mildns {

std::vector<double> solver_times(std::span<const double> times,
                                 const SolverConfig& cfg) {
  return refine_times(times, cfg.quadrature.substeps);
}

QuadratureConfig solver_quadrature(const SolverConfig& cfg) {
  return {1, cfg.quadrature.scheme};
}

BilinearMap ns_bilinear(const SolverConfig& cfg) {
  const QuadratureConfig q = solver_quadrature(cfg);
  return [q](const Trajectory& a, const Trajectory& b) {
    return bilinear_B(a, b, q);
  };
}

OperatorConstants measure_constants(const Trajectory& Uf, const Trajectory& x1,
                                    const SolverConfig& cfg) {
  if (cfg.constant_samples == 0) return {};
  std::vector<Trajectory> samples =
      operator_samples(x1.grid(), x1.times(), cfg.constant_samples, cfg.seed);
  const BilinearMap B = ns_bilinear(cfg);
  if (!x1.is_zero()) {
    // x1 and the first Picard correction B(x1, x1) join the corpus; the
    // pairs (x1, B(x1, x1)) probe the direction the iteration actually takes.
    samples.push_back(x1);
    samples.push_back(B(x1, x1));
  }
  LinearMap L;
  if (!Uf.is_zero()) {
    L = [&](const Trajectory& v) { return 2.0 * B(Uf, v); };
  }
  return estimate_operator_constants(L, B, contraction_norm_fn(cfg.p), samples);
}

UfResult compute_Uf(ForceSpec& f, const Grid& grid,
                    std::span<const double> times, const SolverConfig& cfg,
                    double budget, double tol) {
  validate(cfg);
  const auto fine = solver_times(times, cfg);
  Trajectory response = force_response(f, grid, fine, solver_quadrature(cfg));
  YNormReport y = y_norm_of_response(response);
  f.cached_y_norm = y.value;

  const Trajectory zero = Trajectory::zeros(grid, fine);
  const OperatorConstants c = measure_constants(zero, response, cfg);
  auto solved = solve_fixed_point(response, LinearMap{}, ns_bilinear(cfg),
                                  contraction_norm_fn(cfg.p), cfg, c);
  UfResult out{std::move(solved.solution), std::move(response),
               std::move(solved.report), std::move(y)};
  for (const auto& s : out.Uf.states()) {
    out.sup_weak_l3 = std::max(out.sup_weak_l3, weak_l3_norm(s));
  }
  out.bound_holds = out.report.status == SolveStatus::converged &&
                    out.sup_weak_l3 <= 2.0 * out.y.value * (1.0 + tol);
  out.budget_exceeded = out.y.value > budget;
  return out;
}

FixedPointResult solve_perturbation(const SpectralField& u0, const Trajectory& Uf,
                                    const SolverConfig& cfg,
                                    std::optional<OperatorConstants> constants) {
  validate(cfg);
  if (!(u0.grid() == Uf.grid())) {
    throw std::invalid_argument("perturbation: grid mismatch");
  }
  const Trajectory x1 = heat_flow_trajectory(u0, Uf.times());
  const BilinearMap B = ns_bilinear(cfg);
  LinearMap L;
  if (!Uf.is_zero()) {
    L = [&Uf, B](const Trajectory& v) { return 2.0 * B(Uf, v); };
  }
  const bool measured = constants.has_value() || cfg.constant_samples > 0;
  const OperatorConstants c =
      constants ? *constants : measure_constants(Uf, x1, cfg);
  if (L && measured && c.lambda >= cfg.lambda_refusal) {
    ConvergenceReport rep;
    rep.status = SolveStatus::refused;
    rep.gamma_est = c.gamma;
    rep.lambda_est = c.lambda;
    rep.message = "measured lambda " + std::to_string(c.lambda) +
                  " at or above the refusal threshold";
    return {Trajectory::zeros(Uf.grid(), Uf.times()), std::move(rep)};
  }
  return solve_fixed_point(x1, L, B, contraction_norm_fn(cfg.p), cfg, c);
}

std::vector<double> mild_residuals(const Trajectory& uf, const SpectralField& u0,
                                   const Trajectory& response,
                                   const SolverConfig& cfg) {
  Trajectory r = uf;
  r -= heat_flow_trajectory(u0, uf.times());
  r -= response;
  r -= ns_bilinear(cfg)(uf, uf);
  double scale = 0.0;
  for (const auto& s : uf.states()) scale = std::max(scale, s.l2_norm());
  std::vector<double> out;
  out.reserve(r.size());
  for (const auto& s : r.states()) {
    const double e = s.l2_norm();
    out.push_back(scale > 0.0 ? e / scale : e);
  }
  return out;
}

NsfResult solve_nsf(const SpectralField& u0, ForceSpec& f, const Grid& grid,
                    std::span<const double> times, const SolverConfig& cfg) {
  UfResult stage = compute_Uf(f, grid, times, cfg);
  NsfResult out{stage.Uf, stage.Uf, Trajectory::zeros(grid, stage.Uf.times()),
                std::move(stage), {}, {}, 0.0, false, ""};
  if (out.force_stage.report.status != SolveStatus::converged) {
    out.failed_stage = "force";
    return out;
  }
  auto pert = solve_perturbation(u0, out.Uf, cfg);
  out.perturbation_report = pert.report;
  out.v = std::move(pert.solution);
  if (pert.report.status != SolveStatus::converged) {
    out.failed_stage = "perturbation";
    return out;
  }
  out.uf = out.Uf + out.v;
  out.residuals = mild_residuals(out.uf, u0, out.force_stage.response, cfg);
  out.max_residual =
      *std::max_element(out.residuals.begin(), out.residuals.end());
  out.converged = true;
  return out;
}

void to_json(nlohmann::json& j, const BlowupReport& r) {
  j = nlohmann::json{{"horizons", r.horizons},
                     {"growth", r.growth},
                     {"statuses", r.statuses},
                     {"flagged", r.flagged},
                     {"flag_horizon", r.flag_horizon},
                     {"flag_reason", r.flag_reason}};
}

BlowupReport detect_blowup(const SpectralField& u0, const Trajectory& Uf_full,
                           std::span<const double> horizons,
                           const SolverConfig& cfg) {
  BlowupReport out;
  double running = 0.0;
  double last = 0.0;
  for (double T : horizons) {
    if (!(T > last)) throw std::invalid_argument("blowup: horizons must increase");
    last = T;
    const Trajectory Uf = Uf_full.prefix(T);
    const auto solved = solve_perturbation(u0, Uf, cfg);
    const auto& rep = solved.report;
    const double norm =
        rep.iterate_norms.empty() ? rep.x1_norm : rep.iterate_norms.back();
    running = std::max(running, std::isfinite(norm) ? norm : running);
    out.horizons.push_back(T);
    out.growth.push_back(running);
    out.statuses.push_back(to_string(rep.status));
    std::string reason;
    if (rep.status != SolveStatus::converged) {
      reason = "solver status " + to_string(rep.status);
    } else if (norm > cfg.divergence_threshold) {
      reason = "norm above divergence threshold";
    }
    if (!reason.empty()) {
      out.flagged = true;
      out.flag_horizon = T;
      out.flag_reason = reason;
      break;
    }
  }
  return out;
}

}  // namespace mildns
