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

#include "mildns/spectral_field.hpp"

namespace mildns {

/// a·cos(k·x) + b·sin(k·x) for the lattice wavevector of m.
SpectralField single_mode_field(const Grid& grid, const ModeIndex& m,
                                const Vec3& cos_amp, const Vec3& sin_amp = {});

/// Random divergence-free field with energy in lattice shells
/// k_lo <= |m| <= k_hi and amplitude ∝ |m|^slope. Zero mean, dealiased,
/// Hermitian. Deterministic in `seed`.
SpectralField random_banded_field(const Grid& grid, std::uint64_t seed,
                                  double k_lo, double k_hi,
                                  double slope = 0.0);

/// A·(sin kx cos ky cos kz, -cos kx sin ky cos kz, 0) with integer k.
SpectralField taylor_green_field(const Grid& grid, double amplitude, int k);

/// Leray projection of a periodized Gaussian c·exp(-|x-x0|²/(2σ²)); a
/// localized finite-energy divergence-free bump.
SpectralField gaussian_bump_field(const Grid& grid, const Vec3& direction,
                                  double width, const Vec3& center);

/// ∇g for the periodized Gaussian g = A·exp(-|x-x0|²/(2σ²)).
SpectralField gaussian_gradient_field(const Grid& grid, double amplitude,
                                      double width, const Vec3& center);

}  // namespace mildns
