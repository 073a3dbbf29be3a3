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

#include "mildns/semigroup.hpp"

namespace mildns {

enum class ForceKind {
  zero,
  /// ∇g for a Gaussian g; the Leray projection removes it entirely.
  gradient_of_profile,
  /// Σ a·cos(k·x) + b·sin(k·x) over listed lattice modes.
  time_independent_mode_sum,
  /// amplitude·direction·G_σ with G_σ the unit-mass periodized Gaussian.
  scaled_dirac_surrogate,
};

std::string to_string(ForceKind kind);
ForceKind force_kind_from_string(const std::string& name);

struct ForceMode {
  ModeIndex m;
  Vec3 cos_amp{};
  Vec3 sin_amp{};
};

/// External force f(t, x). All kinds are steady; evaluate() ignores t but
/// keeps the time argument so responses go through the generic Duhamel path.
struct ForceSpec {
  ForceKind kind = ForceKind::zero;
  double amplitude = 1.0;
  double width = 0.5;
  Vec3 center{};
  Vec3 direction{1.0, 0.0, 0.0};
  std::vector<ForceMode> modes;

  /// Set by y_norm().
  std::optional<double> cached_y_norm;

  /// f(t) on the grid, dealiased and Hermitian. Not Leray projected.
  SpectralField evaluate(const Grid& grid, double t) const;
  ForceSpec scaled(double factor) const;
};

/// ∫_0^t e^{(t-s)Δ} P f(s) ds at every entry of `times`.
Trajectory force_response(const ForceSpec& f, const Grid& grid,
                          std::span<const double> times,
                          const QuadratureConfig& q);

struct YNormReport {
  double value = 0.0;
  double argmax_time = 0.0;
  /// sup over all samples <= 1.01 × sup over the first 80% of samples.
  bool saturated = true;
  /// weak-L³ norm of the response at each time.
  std::vector<double> series;
};

/// sup_t ‖force_response(t)‖_{L^{3,∞}} over the sampled times; stores the
/// value in f.cached_y_norm.
YNormReport y_norm(ForceSpec& f, const Grid& grid, std::span<const double> times,
                   const QuadratureConfig& q);
/// Same from an already computed response.
YNormReport y_norm_of_response(const Trajectory& response);

}  // namespace mildns
