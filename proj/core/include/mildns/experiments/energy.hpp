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

#include <vector>

#include "mildns/trajectory.hpp"

namespace mildns::experiments {

/// Energy bookkeeping for a difference field ω(t).
struct EnergyReport {
  std::vector<double> times;
  /// ‖ω(t)‖²_{L²}
  std::vector<double> omega_l2_sq;
  /// ∫_0^t ‖∇ω‖²_{L²} ds (trapezoid).
  std::vector<double> cumulative_dissipation;
  /// ‖ω(t0)‖²·max(t/t0, 1)^exponent
  std::vector<double> gronwall_bound;
  double t0 = 0.0;
  double exponent = 0.0;
};

EnergyReport energy_report(const Trajectory& omega, double t0, double exponent);

/// ∫ (a·∇)b · c dx by grid quadrature.
double trilinear_term(const SpectralField& a, const SpectralField& b,
                      const SpectralField& c);

}  // namespace mildns::experiments
