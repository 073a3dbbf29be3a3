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

#include "mildns/spectral_field.hpp"

namespace mildns {

/// Per-mode û ↦ û - k(k·û)/|k|² for k ≠ 0; the k = 0 mode is untouched.
SpectralField leray_project(const SpectralField& u);

/// (1/2)·P∇·(u⊗v + v⊗u), products formed in physical space with 2/3-rule
/// truncation of inputs and output. Bitwise symmetric in (u, v).
SpectralField nonlinear_term(const SpectralField& u, const SpectralField& v);

/// Spectral gradient of the velocity: component (i, j) holds ∂_j u_i.
std::array<PhysicalField, 3> velocity_gradient(const SpectralField& u);

enum class RescaleMode {
  /// u_λ lives on a box of side L/λ with the same n; exact on the lattice.
  matched_box,
  /// u_λ stays on the original box; modes are moved m ↦ λm and dropped when
  /// they leave the lattice (or, for λ < 1, when m is not divisible).
  fixed_box,
};

struct RescaleResult {
  SpectralField field;
  /// Fraction of Σ|û|² dropped by the remap (always 0 for matched_box).
  double truncated_fraction = 0.0;
};

/// Navier-Stokes dilation u ↦ λ·u(λx) with λ = 2^m.
RescaleResult rescale_field(const SpectralField& u, int m,
                            RescaleMode mode = RescaleMode::matched_box);

}  // namespace mildns
