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

#include "mildns/spectral_field.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <stdexcept>

#include "mildns/fft.hpp"

namespace mildns {

PhysicalField::PhysicalField(const Grid& grid)
    : grid_(grid), data_(3 * grid.physical_size(), 0.0) {}

std::span<double> PhysicalField::component(int c) {
  const std::size_t s = grid_.physical_size();
  return std::span<double>(data_).subspan(c * s, s);
}

std::span<const double> PhysicalField::component(int c) const {
  const std::size_t s = grid_.physical_size();
  return std::span<const double>(data_).subspan(c * s, s);
}

std::vector<double> PhysicalField::magnitude() const {
  const std::size_t s = grid_.physical_size();
  std::vector<double> out(s);
  const double* a = data_.data();
  const double* b = a + s;
  const double* c = b + s;
  for (std::size_t i = 0; i < s; ++i) {
    out[i] = std::sqrt(a[i] * a[i] + b[i] * b[i] + c[i] * c[i]);
  }
  return out;
}

SpectralField::SpectralField(const Grid& grid)
    : grid_(grid), data_(3 * grid.spectral_size(), Complex(0.0, 0.0)) {}

std::span<Complex> SpectralField::component(int c) {
  const std::size_t s = grid_.spectral_size();
  return std::span<Complex>(data_).subspan(c * s, s);
}

std::span<const Complex> SpectralField::component(int c) const {
  const std::size_t s = grid_.spectral_size();
  return std::span<const Complex>(data_).subspan(c * s, s);
}

CVec3 SpectralField::mode(const ModeIndex& m) const {
  const int half = grid_.n() / 2;
  if (std::abs(m.x) > half || std::abs(m.y) > half || std::abs(m.z) > half) {
    throw std::out_of_range("spectral field: mode index outside the lattice");
  }
  const bool conj = m.z < 0;
  const ModeIndex s = conj ? -m : m;
  const std::size_t idx = grid_.flat_index(grid_.axis_position(s.x),
                                           grid_.axis_position(s.y), s.z);
  const std::size_t stride = grid_.spectral_size();
  CVec3 out;
  for (int c = 0; c < 3; ++c) {
    const Complex v = data_[c * stride + idx];
    out[c] = conj ? std::conj(v) : v;
  }
  return out;
}

void SpectralField::add_mode(const ModeIndex& m, const CVec3& c) {
  const int half = grid_.n() / 2;
  if (std::abs(m.x) > half || std::abs(m.y) > half || std::abs(m.z) > half) {
    throw std::out_of_range("spectral field: mode index outside the lattice");
  }
  const std::size_t stride = grid_.spectral_size();
  auto slot = [&](const ModeIndex& s) {
    return grid_.flat_index(grid_.axis_position(s.x), grid_.axis_position(s.y),
                            std::abs(s.z));
  };
  if (m == ModeIndex{}) {
    for (int k = 0; k < 3; ++k) data_[k * stride] += c[k].real();
    return;
  }
  const bool self_conjugate_plane = (m.z == 0 || std::abs(m.z) == half);
  if (m.z > 0 || self_conjugate_plane) {
    const std::size_t a = slot(m);
    for (int k = 0; k < 3; ++k) data_[k * stride + a] += c[k];
  }
  if (m.z < 0 || self_conjugate_plane) {
    const std::size_t b = slot(-m);
    for (int k = 0; k < 3; ++k) data_[k * stride + b] += std::conj(c[k]);
  }
}

bool SpectralField::is_zero() const {
  return std::all_of(data_.begin(), data_.end(),
                     [](const Complex& v) { return v == Complex(0.0, 0.0); });
}

double SpectralField::max_abs() const {
  double m = 0.0;
  for (const auto& v : data_) m = std::max(m, std::abs(v));
  return m;
}

void SpectralField::require_same_grid(const SpectralField& other) const {
  if (!(grid_ == other.grid_)) {
    throw std::invalid_argument("spectral field: grid mismatch");
  }
}

SpectralField& SpectralField::operator+=(const SpectralField& other) {
  require_same_grid(other);
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
  divfree_ = divfree_ && other.divfree_;
  return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& other) {
  require_same_grid(other);
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
  divfree_ = divfree_ && other.divfree_;
  return *this;
}

SpectralField& SpectralField::operator*=(double s) {
  for (auto& v : data_) v *= s;
  return *this;
}

SpectralField& SpectralField::axpy(double a, const SpectralField& x) {
  require_same_grid(x);
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += a * x.data_[i];
  divfree_ = divfree_ && x.divfree_;
  return *this;
}

SpectralField operator+(SpectralField a, const SpectralField& b) {
  a += b;
  return a;
}

SpectralField operator-(SpectralField a, const SpectralField& b) {
  a -= b;
  return a;
}

SpectralField operator*(double s, SpectralField a) {
  a *= s;
  return a;
}

PhysicalField SpectralField::to_physical() const {
  PhysicalField out(grid_);
  const FftEngine& fft = fft_engine(grid_.n());
  for (int c = 0; c < 3; ++c) fft.inverse(component(c), out.component(c));
  return out;
}

SpectralField SpectralField::from_physical(const PhysicalField& u) {
  SpectralField out(u.grid());
  const FftEngine& fft = fft_engine(u.grid().n());
  for (int c = 0; c < 3; ++c) fft.forward(u.component(c), out.component(c));
  return out;
}

void SpectralField::symmetrize() {
  const int n = grid_.n();
  const std::size_t stride = grid_.spectral_size();
  for (int c = 0; c < 3; ++c) {
    Complex* d = data_.data() + c * stride;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        const int ci = (n - i) % n;
        const int cj = (n - j) % n;
        const std::size_t a = grid_.flat_index(i, j, 0);
        const std::size_t b = grid_.flat_index(ci, cj, 0);
        if (a > b) continue;
        if (a == b) {
          d[a] = Complex(d[a].real(), 0.0);
        } else {
          const Complex avg = 0.5 * (d[a] + std::conj(d[b]));
          d[a] = avg;
          d[b] = std::conj(avg);
        }
      }
    }
  }
  for_each_mode(grid_, [&](std::size_t idx, const ModeIndex&, int i, int j,
                           int l) {
    if (grid_.is_nyquist(i, j, l)) {
      for (int c = 0; c < 3; ++c) data_[c * stride + idx] = 0.0;
    }
  });
}

void SpectralField::dealias() {
  const int cut = grid_.dealias_cutoff();
  const std::size_t stride = grid_.spectral_size();
  for_each_mode(grid_, [&](std::size_t idx, const ModeIndex& m, int, int, int) {
    if (std::abs(m.x) > cut || std::abs(m.y) > cut || m.z > cut) {
      for (int c = 0; c < 3; ++c) data_[c * stride + idx] = 0.0;
    }
  });
}

void SpectralField::zero_mean() {
  const std::size_t stride = grid_.spectral_size();
  for (int c = 0; c < 3; ++c) data_[c * stride] = 0.0;
}

double SpectralField::hermitian_defect() const {
  const int n = grid_.n();
  const std::size_t stride = grid_.spectral_size();
  const double scale = max_abs();
  if (scale == 0.0) return 0.0;
  double worst = 0.0;
  for (int l : {0, n / 2}) {
    for (int c = 0; c < 3; ++c) {
      const Complex* d = data_.data() + c * stride;
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
          const Complex a = d[grid_.flat_index(i, j, l)];
          const Complex b = d[grid_.flat_index((n - i) % n, (n - j) % n, l)];
          worst = std::max(worst, std::abs(a - std::conj(b)));
        }
      }
    }
  }
  return worst / scale;
}

double SpectralField::divergence_defect() const {
  const std::size_t stride = grid_.spectral_size();
  double num = 0.0;
  double den = 0.0;
  for_each_mode(grid_, [&](std::size_t idx, const ModeIndex& m, int, int, int) {
    const Vec3 k = grid_.wavevector(m);
    const Complex u0 = data_[idx];
    const Complex u1 = data_[stride + idx];
    const Complex u2 = data_[2 * stride + idx];
    const Complex div = k[0] * u0 + k[1] * u1 + k[2] * u2;
    const double kn = std::sqrt(k[0] * k[0] + k[1] * k[1] + k[2] * k[2]);
    const double un =
        std::sqrt(std::norm(u0) + std::norm(u1) + std::norm(u2));
    num = std::max(num, std::abs(div));
    den = std::max(den, kn * un);
  });
  return den == 0.0 ? 0.0 : num / den;
}

double SpectralField::l2_norm_sq() const {
  const std::size_t stride = grid_.spectral_size();
  double sum = 0.0;
  for_each_mode(grid_, [&](std::size_t idx, const ModeIndex&, int, int, int l) {
    const double w = half_spectrum_weight(grid_, l);
    sum += w * (std::norm(data_[idx]) + std::norm(data_[stride + idx]) +
                std::norm(data_[2 * stride + idx]));
  });
  return sum * grid_.volume();
}

double SpectralField::l2_norm() const { return std::sqrt(l2_norm_sq()); }

double SpectralField::h1_seminorm_sq() const {
  const std::size_t stride = grid_.spectral_size();
  const double ku2 = grid_.k_unit() * grid_.k_unit();
  double sum = 0.0;
  for_each_mode(grid_, [&](std::size_t idx, const ModeIndex& m, int, int,
                           int l) {
    const double w = half_spectrum_weight(grid_, l) * ku2 * m.norm_sq();
    sum += w * (std::norm(data_[idx]) + std::norm(data_[stride + idx]) +
                std::norm(data_[2 * stride + idx]));
  });
  return sum * grid_.volume();
}

}  // namespace mildns
