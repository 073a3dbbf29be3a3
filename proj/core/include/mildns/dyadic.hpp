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

#include "mildns/spectral_field.hpp"

namespace mildns {

/// Radial cutoff ψ(r): 1 for r <= 1, 0 for r >= 2, and 1 - S(log₂ r) in
/// between with the quintic smoothstep S(x) = 10x³ - 15x⁴ + 6x⁵.
double smooth_cutoff(double r);

/// Band multiplier φ_j(|ξ|) = ψ(|ξ|/2^j) - ψ(|ξ|/2^{j-1}), supported on
/// 2^{j-1} < |ξ| < 2^{j+1}.
double band_multiplier(double k_magnitude, int j);

/// Dyadic bands that see the lattice of a grid.
///
/// j_min = floor(log₂ k_min) and j_max = ceil(log₂ k_corner) with k_corner
/// the largest |k| on the lattice, so Σ_{j_min..j_max} φ_j = 1 at every
/// nonzero lattice wavevector.
struct BandRange {
  int j_min;
  int j_max;

  int count() const { return j_max - j_min + 1; }
  bool contains(int j) const { return j >= j_min && j <= j_max; }
};

BandRange band_range(const Grid& grid);

/// Δ_j u: multiplies û(k) by φ_j(|k|).
SpectralField dyadic_block(const SpectralField& u, int j);

/// All band multipliers of a grid, laid out [band][spectral index].
class BandMultipliers {
 public:
  explicit BandMultipliers(const Grid& grid);

  const BandRange& range() const { return range_; }
  /// Multiplier table for band j.
  const std::vector<double>& band(int j) const;

 private:
  BandRange range_;
  std::vector<std::vector<double>> tables_;
};

const BandMultipliers& band_multipliers(const Grid& grid);

}  // namespace mildns
