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

#include <functional>
#include <span>
#include <vector>

#include "mildns/trajectory.hpp"

namespace mildns {

enum class QuadratureScheme {
  integrating_factor_trapezoid,
  integrating_factor_midpoint,
};

/// Time discretization of Duhamel integrals. Every interval of the output
/// time grid is split into `substeps` equal pieces; on each piece the heat
/// factor is integrated exactly per mode against a linear (trapezoid) or
/// constant midpoint (midpoint) model of the source.
struct QuadratureConfig {
  int substeps = 1;
  QuadratureScheme scheme = QuadratureScheme::integrating_factor_trapezoid;
};

void validate(const QuadratureConfig& q);

/// Exponential-integrator weights for one piece of length h and decay rate
/// κ = |k|² (z = κh, E = e^{-z}):
///   decay     = E
///   left      = h(1 - E(1 + z))/z²       weight of f(a)
///   right     = h(1 - E)/z - left        weight of f(b)
///   midpoint  = h(1 - E)/z               weight of f((a + b)/2)
/// so that ∫_a^b e^{-κ(b-s)} f(s) ds is exact for linear f (trapezoid) or
/// constant f (midpoint). Small z uses the Taylor series.
struct EtdWeights {
  double decay;
  double left;
  double right;
  double midpoint;
};
EtdWeights etd_weights(double kappa, double h);

/// e^{tΔ}u: multiplies û(k) by e^{-|k|²t}.
SpectralField heat_flow(const SpectralField& u, double t);
/// e^{tΔ}u at every entry of `times`.
Trajectory heat_flow_trajectory(const SpectralField& u,
                                std::vector<double> times);

using SourceFn = std::function<SpectralField(double)>;

/// ∫_0^t e^{(t-s)Δ} f(s) ds with `q.substeps` equal pieces on [0, t].
SpectralField duhamel(const SourceFn& f, double t, const QuadratureConfig& q);

/// Same integral for a sampled source, linearly interpolated in time. t may
/// fall between samples.
SpectralField duhamel(const Trajectory& source, double t,
                      const QuadratureConfig& q);

/// ∫_0^{t_i} e^{(t_i-s)Δ} f(s) ds for every source time t_i, accumulated in
/// one pass.
Trajectory duhamel_trajectory(const Trajectory& source,
                              const QuadratureConfig& q);
Trajectory duhamel_trajectory(const SourceFn& f, std::span<const double> times,
                              const QuadratureConfig& q);

/// B(u, v)(t) = -∫_0^t e^{(t-s)Δ} (1/2)P∇·(u⊗v + v⊗u)(s) ds at every time of
/// the shared time grid, with u and v interpolated linearly between samples.
Trajectory bilinear_B(const Trajectory& u, const Trajectory& v,
                      const QuadratureConfig& q);

}  // namespace mildns
