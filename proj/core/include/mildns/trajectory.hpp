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

#include <span>
#include <vector>

#include "mildns/spectral_field.hpp"

namespace mildns {

/// Time-indexed sequence of fields on one grid.
///
/// Invariants: times[0] == 0, times strictly increasing, at least two
/// samples, all states on the same grid.
class Trajectory {
 public:
  Trajectory(std::vector<double> times, std::vector<SpectralField> states);

  static Trajectory zeros(const Grid& grid, std::vector<double> times);
  static Trajectory constant(const SpectralField& field,
                             std::vector<double> times);

  std::size_t size() const { return times_.size(); }
  const std::vector<double>& times() const { return times_; }
  double end_time() const { return times_.back(); }
  const Grid& grid() const { return states_.front().grid(); }

  const SpectralField& state(std::size_t i) const { return states_[i]; }
  SpectralField& state(std::size_t i) { return states_[i]; }
  const std::vector<SpectralField>& states() const { return states_; }

  bool is_zero() const;
  bool same_time_grid(const Trajectory& other) const;

  /// Linear interpolation in time; t must lie within [0, end_time()].
  SpectralField at(double t) const;

  /// Samples with times[i] <= t_end (t_end must be a sample time).
  Trajectory prefix(double t_end) const;
  /// Restriction to the given sample times, each of which must be present.
  Trajectory sampled_at(std::span<const double> times) const;

  Trajectory& operator+=(const Trajectory& other);
  Trajectory& operator-=(const Trajectory& other);
  Trajectory& operator*=(double s);
  Trajectory& axpy(double a, const Trajectory& x);

 private:
  void require_compatible(const Trajectory& other) const;

  std::vector<double> times_;
  std::vector<SpectralField> states_;
};

Trajectory operator+(Trajectory a, const Trajectory& b);
Trajectory operator-(Trajectory a, const Trajectory& b);
Trajectory operator*(double s, Trajectory a);

/// Index of the sample equal to t (relative tolerance 1e-12), or -1.
long find_time(std::span<const double> times, double t);

/// 0, t_first, t_first·r, ..., t_max with `count` points after zero.
std::vector<double> geometric_times(double t_first, double t_max, int count);
/// 0, h, 2h, ..., t_max with `count` points after zero.
std::vector<double> uniform_times(double t_max, int count);
/// Splits every interval into `substeps` equal pieces.
std::vector<double> refine_times(std::span<const double> times, int substeps);
/// Throws unless times start at 0, increase strictly and have >= 2 entries.
void validate_times(std::span<const double> times);

}  // namespace mildns
