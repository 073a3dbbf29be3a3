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

#include "mildns/fields.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "mildns/spectral_ops.hpp"

namespace mildns {
namespace {

// Fourier coefficient of the periodized Gaussian exp(-|x-x0|²/(2σ²)).
Complex gaussian_coefficient(const Grid& g, const ModeIndex& m, double width,
                             const Vec3& center) {
  const Vec3 k = g.wavevector(m);
  const double k2 = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
  const double mass = std::pow(2.0 * std::numbers::pi * width * width, 1.5);
  const double phase = -(k[0] * center[0] + k[1] * center[1] + k[2] * center[2]);
  return mass / g.volume() * std::exp(-0.5 * width * width * k2) *
         Complex(std::cos(phase), std::sin(phase));
}

}  // namespace

SpectralField single_mode_field(const Grid& grid, const ModeIndex& m,
                                const Vec3& cos_amp, const Vec3& sin_amp) {
  SpectralField out(grid);
  const Complex I(0.0, 1.0);
  CVec3 c;
  for (int i = 0; i < 3; ++i) c[i] = 0.5 * (cos_amp[i] - I * sin_amp[i]);
  out.add_mode(m, c);
  return out;
}

SpectralField random_banded_field(const Grid& grid, std::uint64_t seed,
                                  double k_lo, double k_hi, double slope) {
  if (!(k_hi >= k_lo) || k_lo < 0.0) {
    throw std::invalid_argument("random field: need 0 <= k_lo <= k_hi");
  }
  SpectralField out(grid);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const std::size_t ns = grid.spectral_size();
  auto d = out.data();
  for_each_mode(grid, [&](std::size_t idx, const ModeIndex& m, int, int, int) {
    // Draw for every slot so the stream does not depend on the band.
    double r[6];
    for (double& x : r) x = normal(rng);
    const double km = std::sqrt(static_cast<double>(m.norm_sq()));
    if (m == ModeIndex{} || km < k_lo || km > k_hi) return;
    const double amp = std::pow(km, slope);
    for (int c = 0; c < 3; ++c) {
      d[c * ns + idx] = amp * Complex(r[2 * c], r[2 * c + 1]);
    }
  });
  out.dealias();
  out.symmetrize();
  out.zero_mean();
  return leray_project(out);
}

SpectralField taylor_green_field(const Grid& grid, double amplitude, int k) {
  // sin a cos b cos c expands into eight modes (±k, ±k, ±k) with weight
  // s_a/(8i); the four with m_z = -k are the implicit conjugates.
  SpectralField out(grid);
  const Complex I(0.0, 1.0);
  for (int sx : {-1, 1}) {
    for (int sy : {-1, 1}) {
      const ModeIndex m{sx * k, sy * k, k};
      const CVec3 c{amplitude * double(sx) / (8.0 * I),
                    -amplitude * double(sy) / (8.0 * I), 0.0};
      out.add_mode(m, c);
    }
  }
  out.set_divergence_free(true);
  return out;
}

SpectralField gaussian_bump_field(const Grid& grid, const Vec3& direction,
                                  double width, const Vec3& center) {
  if (!(width > 0.0)) throw std::invalid_argument("bump: width must be > 0");
  SpectralField out(grid);
  const std::size_t ns = grid.spectral_size();
  auto d = out.data();
  for_each_mode(grid, [&](std::size_t idx, const ModeIndex& m, int, int, int) {
    if (m == ModeIndex{}) return;
    const Complex gk = gaussian_coefficient(grid, m, width, center);
    for (int c = 0; c < 3; ++c) d[c * ns + idx] = direction[c] * gk;
  });
  out.dealias();
  out.symmetrize();
  return leray_project(out);
}

SpectralField gaussian_gradient_field(const Grid& grid, double amplitude,
                                      double width, const Vec3& center) {
  if (!(width > 0.0)) throw std::invalid_argument("gradient: width must be > 0");
  SpectralField out(grid);
  const std::size_t ns = grid.spectral_size();
  const Complex I(0.0, 1.0);
  auto d = out.data();
  for_each_mode(grid, [&](std::size_t idx, const ModeIndex& m, int, int, int) {
    if (m == ModeIndex{}) return;
    const Vec3 k = grid.wavevector(m);
    const Complex gk = amplitude * gaussian_coefficient(grid, m, width, center);
    for (int c = 0; c < 3; ++c) d[c * ns + idx] = I * k[c] * gk;
  });
  out.dealias();
  out.symmetrize();
  return out;
}

}  // namespace mildns
