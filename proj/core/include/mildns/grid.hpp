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

#include <array>
#include <cstddef>
#include <numbers>

namespace mildns {

/// Signed integer lattice index m; the physical wavevector is k = (2π/L)·m.
struct ModeIndex {
  int x = 0;
  int y = 0;
  int z = 0;

  constexpr int norm_sq() const { return x * x + y * y + z * z; }
  constexpr ModeIndex operator-() const { return {-x, -y, -z}; }
  friend constexpr bool operator==(const ModeIndex&, const ModeIndex&) = default;
};

using Vec3 = std::array<double, 3>;

/// Periodic cube [0, L)^3 sampled on n^3 points.
///
/// Spectral data uses the real-to-complex half layout: index (i, j, l) with
/// i, j in [0, n) and l in [0, n/2], flattened as (i*n + j)*(n/2 + 1) + l.
/// Physical data is flattened as (i*n + j)*n + l with x_i = i*L/n.
class Grid {
 public:
  Grid(int n_per_axis, double box_length);

  int n() const { return n_; }
  double box_length() const { return length_; }
  int nz() const { return n_ / 2 + 1; }

  /// Lattice spacing in wavenumber space, 2π/L.
  double k_unit() const { return 2.0 * std::numbers::pi / length_; }
  /// Largest resolved wavenumber per axis, (2π/L)·(n/2).
  double k_max() const { return k_unit() * (n_ / 2); }

  std::size_t spectral_size() const {
    return static_cast<std::size_t>(n_) * n_ * nz();
  }
  std::size_t physical_size() const {
    return static_cast<std::size_t>(n_) * n_ * n_;
  }
  double cell_volume() const {
    const double h = length_ / n_;
    return h * h * h;
  }
  double volume() const { return length_ * length_ * length_; }

  /// Largest |m_i| kept by the 2/3 rule: modes with 3|m_i| < n.
  int dealias_cutoff() const { return (n_ - 1) / 3; }

  /// Signed lattice index for an FFT axis position (i = n/2 maps to -n/2).
  int signed_index(int i) const { return i < n_ / 2 ? i : i - n_; }
  int axis_position(int m) const { return m >= 0 ? m : m + n_; }

  ModeIndex mode_at(int i, int j, int l) const {
    return {signed_index(i), signed_index(j), l};
  }
  std::size_t flat_index(int i, int j, int l) const {
    return (static_cast<std::size_t>(i) * n_ + j) * nz() + l;
  }
  bool is_nyquist(int i, int j, int l) const {
    return i == n_ / 2 || j == n_ / 2 || l == n_ / 2;
  }
  Vec3 wavevector(const ModeIndex& m) const {
    const double u = k_unit();
    return {u * m.x, u * m.y, u * m.z};
  }

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  int n_;
  double length_;
};

/// Validating constructor: n even and at least 8, L > 0.
Grid make_grid(int n_per_axis, double box_length);

/// Calls fn(flat_index, mode, i, j, l) for every stored spectral mode.
template <class Fn>
void for_each_mode(const Grid& g, Fn&& fn) {
  const int n = g.n();
  const int nz = g.nz();
  std::size_t idx = 0;
  for (int i = 0; i < n; ++i) {
    const int mx = g.signed_index(i);
    for (int j = 0; j < n; ++j) {
      const int my = g.signed_index(j);
      for (int l = 0; l < nz; ++l, ++idx) {
        fn(idx, ModeIndex{mx, my, l}, i, j, l);
      }
    }
  }
}

}  // namespace mildns
