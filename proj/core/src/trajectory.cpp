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

#include "mildns/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace mildns {

void validate_times(std::span<const double> times) {
  if (times.size() < 2) {
    throw std::invalid_argument("time grid: need at least two samples");
  }
  if (times.front() != 0.0) {
    throw std::invalid_argument("time grid: first sample must be t = 0");
  }
  for (std::size_t i = 1; i < times.size(); ++i) {
    if (!(times[i] > times[i - 1]) || !std::isfinite(times[i])) {
      throw std::invalid_argument("time grid: times must increase strictly");
    }
  }
}

Trajectory::Trajectory(std::vector<double> times,
                       std::vector<SpectralField> states)
    : times_(std::move(times)), states_(std::move(states)) {
  validate_times(times_);
  if (states_.size() != times_.size()) {
    throw std::invalid_argument("trajectory: times/states length mismatch");
  }
  for (const auto& s : states_) {
    if (!(s.grid() == states_.front().grid())) {
      throw std::invalid_argument("trajectory: states on different grids");
    }
  }
}

Trajectory Trajectory::zeros(const Grid& grid, std::vector<double> times) {
  std::vector<SpectralField> states(times.size(), SpectralField(grid));
  for (auto& s : states) s.set_divergence_free(true);
  return Trajectory(std::move(times), std::move(states));
}

Trajectory Trajectory::constant(const SpectralField& field,
                                std::vector<double> times) {
  std::vector<SpectralField> states(times.size(), field);
  return Trajectory(std::move(times), std::move(states));
}

bool Trajectory::is_zero() const {
  return std::all_of(states_.begin(), states_.end(),
                     [](const SpectralField& s) { return s.is_zero(); });
}

bool Trajectory::same_time_grid(const Trajectory& other) const {
  return times_ == other.times_;
}

SpectralField Trajectory::at(double t) const {
  if (t < 0.0 || t > times_.back() * (1.0 + 1e-14)) {
    throw std::out_of_range("trajectory: time outside sampled span");
  }
  const auto it = std::upper_bound(times_.begin(), times_.end(), t);
  if (it == times_.end()) return states_.back();
  const std::size_t hi = static_cast<std::size_t>(it - times_.begin());
  const std::size_t lo = hi - 1;
  if (t == times_[lo]) return states_[lo];
  const double w = (t - times_[lo]) / (times_[hi] - times_[lo]);
  SpectralField out = states_[lo];
  out *= (1.0 - w);
  out.axpy(w, states_[hi]);
  out.set_divergence_free(states_[lo].divergence_free() &&
                          states_[hi].divergence_free());
  return out;
}

long find_time(std::span<const double> times, double t) {
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (std::abs(times[i] - t) <= 1e-12 * std::max(1.0, std::abs(t))) {
      return static_cast<long>(i);
    }
  }
  return -1;
}

Trajectory Trajectory::prefix(double t_end) const {
  const long idx = find_time(times_, t_end);
  if (idx < 1) {
    throw std::invalid_argument("trajectory: prefix end must be a sample > 0");
  }
  std::vector<double> t(times_.begin(), times_.begin() + idx + 1);
  std::vector<SpectralField> s(states_.begin(), states_.begin() + idx + 1);
  return Trajectory(std::move(t), std::move(s));
}

Trajectory Trajectory::sampled_at(std::span<const double> times) const {
  std::vector<double> t;
  std::vector<SpectralField> s;
  for (double x : times) {
    const long idx = find_time(times_, x);
    if (idx < 0) {
      throw std::invalid_argument("trajectory: requested time not sampled: " +
                                  std::to_string(x));
    }
    t.push_back(times_[idx]);
    s.push_back(states_[idx]);
  }
  return Trajectory(std::move(t), std::move(s));
}

void Trajectory::require_compatible(const Trajectory& other) const {
  if (!same_time_grid(other)) {
    throw std::invalid_argument("trajectory: mismatched time grids");
  }
  if (!(grid() == other.grid())) {
    throw std::invalid_argument("trajectory: grid mismatch");
  }
}

Trajectory& Trajectory::operator+=(const Trajectory& other) {
  require_compatible(other);
  for (std::size_t i = 0; i < states_.size(); ++i) states_[i] += other.states_[i];
  return *this;
}

Trajectory& Trajectory::operator-=(const Trajectory& other) {
  require_compatible(other);
  for (std::size_t i = 0; i < states_.size(); ++i) states_[i] -= other.states_[i];
  return *this;
}

Trajectory& Trajectory::operator*=(double s) {
  for (auto& st : states_) st *= s;
  return *this;
}

Trajectory& Trajectory::axpy(double a, const Trajectory& x) {
  require_compatible(x);
  for (std::size_t i = 0; i < states_.size(); ++i) states_[i].axpy(a, x.states_[i]);
  return *this;
}

Trajectory operator+(Trajectory a, const Trajectory& b) {
  a += b;
  return a;
}

Trajectory operator-(Trajectory a, const Trajectory& b) {
  a -= b;
  return a;
}

Trajectory operator*(double s, Trajectory a) {
  a *= s;
  return a;
}

std::vector<double> geometric_times(double t_first, double t_max, int count) {
  if (!(t_first > 0.0) || !(t_max > t_first) || count < 2) {
    throw std::invalid_argument(
        "geometric time grid: need 0 < t_first < t_max and count >= 2");
  }
  std::vector<double> t{0.0};
  const double ratio = std::pow(t_max / t_first, 1.0 / (count - 1));
  for (int i = 0; i < count; ++i) t.push_back(t_first * std::pow(ratio, i));
  t.back() = t_max;
  return t;
}

std::vector<double> uniform_times(double t_max, int count) {
  if (!(t_max > 0.0) || count < 1) {
    throw std::invalid_argument("uniform time grid: need t_max > 0, count >= 1");
  }
  std::vector<double> t(count + 1);
  for (int i = 0; i <= count; ++i) t[i] = t_max * i / count;
  return t;
}

std::vector<double> refine_times(std::span<const double> times, int substeps) {
  validate_times(times);
  if (substeps < 1) throw std::invalid_argument("refine: substeps must be >= 1");
  std::vector<double> out{times.front()};
  for (std::size_t i = 1; i < times.size(); ++i) {
    const double a = times[i - 1];
    const double h = (times[i] - a) / substeps;
    for (int s = 1; s < substeps; ++s) out.push_back(a + s * h);
    out.push_back(times[i]);
  }
  return out;
}

}  // namespace mildns
