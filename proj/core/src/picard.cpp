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

#include "mildns/picard.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "mildns/fields.hpp"
#include "mildns/norms.hpp"

namespace mildns {
namespace {

bool finite_trajectory(const Trajectory& x) {
  for (const auto& s : x.states()) {
    if (!std::isfinite(s.max_abs())) return false;
  }
  return true;
}

Trajectory apply(const Trajectory& x1, const LinearMap& L, const BilinearMap& B,
                 const Trajectory& x) {
  Trajectory out = x1;
  if (x.is_zero()) return out;
  if (L) out += L(x);
  out += B(x, x);
  return out;
}

}  // namespace

void validate(const SolverConfig& cfg) {
  if (!(cfg.p > 3.0) || std::isinf(cfg.p)) {
    throw std::invalid_argument("solver: p must be finite and > 3");
  }
  const double r0 = contraction_exponent(cfg.p);
  if (!(r0 > 2.0 && r0 < 2.0 * cfg.p / (cfg.p - 3.0))) {
    throw std::invalid_argument("solver: r0 outside (2, 2p/(p-3))");
  }
  if (!(cfg.rel_tol > 0.0)) throw std::invalid_argument("solver: rel_tol must be > 0");
  if (cfg.max_iters < 1) throw std::invalid_argument("solver: max_iters must be >= 1");
  if (!(cfg.divergence_threshold > 0.0)) {
    throw std::invalid_argument("solver: divergence_threshold must be > 0");
  }
  if (cfg.constant_samples < 0) {
    throw std::invalid_argument("solver: constant_samples must be >= 0");
  }
  validate(cfg.quadrature);
}

std::string to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::converged: return "converged";
    case SolveStatus::diverged: return "diverged";
    case SolveStatus::max_iters: return "max_iters";
    case SolveStatus::refused: return "refused";
  }
  return "unknown";
}

void to_json(nlohmann::json& j, const ConvergenceReport& r) {
  j = nlohmann::json{
      {"status", to_string(r.status)},
      {"iterations", r.iterations},
      {"iterate_norms", r.iterate_norms},
      {"differences", r.differences},
      {"ratios", r.ratios},
      {"gamma_est", r.gamma_est},
      {"lambda_est", r.lambda_est},
      {"x1_norm", r.x1_norm},
      {"solution_norm", r.solution_norm},
      {"residual", r.residual},
      {"small_data_regime", r.small_data_regime},
      {"small_data_bound_holds", r.small_data_bound_holds},
      {"wall_seconds", r.wall_seconds},
      {"message", r.message},
  };
}

TrajectoryNorm contraction_norm_fn(double p) {
  return [p](const Trajectory& x) {
    if (x.is_zero()) return 0.0;
    return contraction_norm(x, p);
  };
}

std::vector<Trajectory> operator_samples(const Grid& grid,
                                         std::span<const double> times,
                                         int count, std::uint64_t seed) {
  std::vector<Trajectory> out;
  out.reserve(count);
  const double k_top = grid.dealias_cutoff();
  for (int i = 0; i < count; ++i) {
    // Spread the samples over low, middle and high shells.
    const double lo = 1.0 + (i % 3) * 0.25 * k_top;
    const double hi = std::min(k_top, lo + 0.35 * k_top + 1.0);
    const SpectralField u0 = random_banded_field(grid, seed + 7919u * i, lo, hi);
    out.push_back(heat_flow_trajectory(u0, {times.begin(), times.end()}));
  }
  return out;
}

OperatorConstants estimate_operator_constants(
    const LinearMap& L, const BilinearMap& B, const TrajectoryNorm& norm,
    std::span<const Trajectory> samples) {
  OperatorConstants c;
  std::vector<double> norms;
  norms.reserve(samples.size());
  for (const auto& x : samples) norms.push_back(norm(x));
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (norms[i] == 0.0) continue;
    if (L) c.lambda = std::max(c.lambda, norm(L(samples[i])) / norms[i]);
    for (std::size_t k = i; k < std::min(i + 2, samples.size()); ++k) {
      if (norms[k] == 0.0) continue;
      const double b = norm(B(samples[i], samples[k]));
      c.gamma = std::max(c.gamma, b / (norms[i] * norms[k]));
    }
  }
  return c;
}

FixedPointResult solve_fixed_point(const Trajectory& x1, const LinearMap& L,
                                   const BilinearMap& B,
                                   const TrajectoryNorm& norm,
                                   const SolverConfig& cfg,
                                   std::optional<OperatorConstants> constants) {
  validate(cfg);
  const auto start = std::chrono::steady_clock::now();
  ConvergenceReport rep;
  if (constants) {
    rep.gamma_est = constants->gamma;
    rep.lambda_est = constants->lambda;
  }
  rep.x1_norm = norm(x1);

  auto finish = [&](Trajectory x, SolveStatus status, std::string msg) {
    rep.status = status;
    rep.message = std::move(msg);
    rep.solution_norm = rep.iterate_norms.empty() ? 0.0 : rep.iterate_norms.back();
    if (constants && rep.gamma_est > 0.0) {
      const double margin = 1.0 - rep.lambda_est;
      rep.small_data_regime =
          margin > 0.0 && rep.x1_norm < margin * margin / (4.0 * rep.gamma_est);
      if (rep.small_data_regime && status == SolveStatus::converged) {
        rep.small_data_bound_holds =
            2.0 * rep.gamma_est * rep.solution_norm <= 1.05 * margin;
      }
    }
    rep.wall_seconds = std::chrono::duration<double>(
                           std::chrono::steady_clock::now() - start)
                           .count();
    return FixedPointResult{std::move(x), std::move(rep)};
  };

  Trajectory x = Trajectory::zeros(x1.grid(), x1.times());
  bool certifying = false;
  for (int it = 1; it <= cfg.max_iters; ++it) {
    Trajectory next = apply(x1, L, B, x);
    rep.iterations = it;
    if (!finite_trajectory(next)) {
      return finish(std::move(x), SolveStatus::diverged, "non-finite iterate");
    }
    const double next_norm = norm(next);
    const double diff = norm(next - x);
    rep.iterate_norms.push_back(next_norm);
    if (!rep.differences.empty() && rep.differences.back() > 0.0) {
      rep.ratios.push_back(diff / rep.differences.back());
    }
    rep.differences.push_back(diff);
    if (!std::isfinite(next_norm) || next_norm > cfg.divergence_threshold) {
      return finish(std::move(next), SolveStatus::diverged,
                    "iterate norm exceeded divergence threshold");
    }
    if (certifying) {
      // `x` was the candidate; `next` = F(x) measures its residual.
      const double xn = rep.iterate_norms[rep.iterate_norms.size() - 2];
      rep.residual = xn > 0.0 ? diff / xn : diff;
      if (rep.residual <= 10.0 * cfg.rel_tol) {
        rep.iterate_norms.pop_back();
        return finish(std::move(x), SolveStatus::converged, "");
      }
      certifying = false;
    }
    const double rel = next_norm > 0.0 ? diff / next_norm : diff;
    x = std::move(next);
    if (rel < cfg.rel_tol) {
      if (x.is_zero()) {
        rep.residual = 0.0;
        return finish(std::move(x), SolveStatus::converged, "");
      }
      certifying = true;
    }
  }
  if (certifying) {
    // Out of iterations before the candidate could be certified.
    rep.residual = std::numeric_limits<double>::quiet_NaN();
  } else if (!rep.differences.empty() && rep.iterate_norms.back() > 0.0) {
    rep.residual = rep.differences.back() / rep.iterate_norms.back();
  }
  return finish(std::move(x), SolveStatus::max_iters,
                "iteration limit reached");
}

}  // namespace mildns
