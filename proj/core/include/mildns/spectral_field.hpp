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
#include <complex>
#include <span>
#include <vector>

#include "mildns/grid.hpp"

namespace mildns {

using Complex = std::complex<double>;
using CVec3 = std::array<Complex, 3>;

class SpectralField;

/// Three real components sampled on the physical grid, component-major.
class PhysicalField {
 public:
  explicit PhysicalField(const Grid& grid);

  const Grid& grid() const { return grid_; }
  std::span<double> component(int c);
  std::span<const double> component(int c) const;
  std::span<double> data() { return data_; }
  std::span<const double> data() const { return data_; }

  /// Pointwise Euclidean magnitude |u(x)|.
  std::vector<double> magnitude() const;

 private:
  Grid grid_;
  std::vector<double> data_;
};

/// Truncated Fourier coefficients of a real 3-vector field on a periodic box.
///
/// Coefficients live in the half-spectrum layout described on Grid; the
/// conjugate half is implicit. `divergence_free()` is a tag set by operations
/// that guarantee k·û(k) = 0 (Leray projection and everything built on it).
class SpectralField {
 public:
  explicit SpectralField(const Grid& grid);

  const Grid& grid() const { return grid_; }
  std::span<Complex> component(int c);
  std::span<const Complex> component(int c) const;
  std::span<Complex> data() { return data_; }
  std::span<const Complex> data() const { return data_; }

  bool divergence_free() const { return divfree_; }
  void set_divergence_free(bool flag) { divfree_ = flag; }

  /// Coefficient vector û(m) for any lattice index, resolving the implicit
  /// conjugate half. Indices with |m_i| > n/2 are rejected.
  CVec3 mode(const ModeIndex& m) const;
  /// Adds c to û(m) and conj(c) to û(-m), keeping the field real.
  void add_mode(const ModeIndex& m, const CVec3& c);

  bool is_zero() const;
  double max_abs() const;

  SpectralField& operator+=(const SpectralField& other);
  SpectralField& operator-=(const SpectralField& other);
  SpectralField& operator*=(double s);
  /// this += a * x
  SpectralField& axpy(double a, const SpectralField& x);

  PhysicalField to_physical() const;
  static SpectralField from_physical(const PhysicalField& u);

  /// Averages û(m) with conj(û(-m)) on the self-conjugate planes and zeroes
  /// Nyquist modes.
  void symmetrize();
  /// Zeroes every mode outside the 2/3-rule cube |m_i| <= dealias_cutoff.
  void dealias();
  void zero_mean();

  /// max_m |û(m) - conj(û(-m))| / max_m |û(m)|; 0 for the zero field.
  double hermitian_defect() const;
  /// max_k |k·û(k)| / max_k |k||û(k)|; 0 for the zero field.
  double divergence_defect() const;

  /// ∫|u|² dx by Parseval.
  double l2_norm_sq() const;
  double l2_norm() const;
  /// ∫|∇u|² dx by Parseval.
  double h1_seminorm_sq() const;

 private:
  void require_same_grid(const SpectralField& other) const;

  Grid grid_;
  std::vector<Complex> data_;
  bool divfree_ = false;
};

SpectralField operator+(SpectralField a, const SpectralField& b);
SpectralField operator-(SpectralField a, const SpectralField& b);
SpectralField operator*(double s, SpectralField a);

/// Parseval weight of a half-spectrum slot: 1 on the self-conjugate planes
/// l = 0 and l = n/2, 2 elsewhere.
inline double half_spectrum_weight(const Grid& g, int l) {
  return (l == 0 || l == g.n() / 2) ? 1.0 : 2.0;
}

}  // namespace mildns
