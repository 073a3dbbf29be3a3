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

#include "mildns/force.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "mildns/fields.hpp"
#include "mildns/norms.hpp"
#include "mildns/spectral_ops.hpp"

namespace mildns {

std::string to_string(ForceKind kind) {
  switch (kind) {
    case ForceKind::zero: return "zero";
    case ForceKind::gradient_of_profile: return "gradient_of_profile";
    case ForceKind::time_independent_mode_sum: return "time_independent_mode_sum";
    case ForceKind::scaled_dirac_surrogate: return "scaled_dirac_surrogate";
  }
  return "unknown";
}

ForceKind force_kind_from_string(const std::string& name) {
  for (ForceKind k : {ForceKind::zero, ForceKind::gradient_of_profile,
                      ForceKind::time_independent_mode_sum,
                      ForceKind::scaled_dirac_surrogate}) {
    if (to_string(k) == name) return k;
  }
  throw std::invalid_argument("unknown force kind '" + name + "'");
}

SpectralField ForceSpec::evaluate(const Grid& grid, double t) const {
  if (!(t >= 0.0)) throw std::invalid_argument("force: t must be >= 0");
  SpectralField out(grid);
  switch (kind) {
    case ForceKind::zero:
      break;
    case ForceKind::gradient_of_profile:
      out = gaussian_gradient_field(grid, amplitude, width, center);
      break;
    case ForceKind::time_independent_mode_sum:
      for (const auto& fm : modes) {
        Vec3 a, b;
        for (int c = 0; c < 3; ++c) {
          a[c] = amplitude * fm.cos_amp[c];
          b[c] = amplitude * fm.sin_amp[c];
        }
        out += single_mode_field(grid, fm.m, a, b);
      }
      out.dealias();
      out.symmetrize();
      out.zero_mean();
      break;
    case ForceKind::scaled_dirac_surrogate: {
      if (!(width > 0.0)) throw std::invalid_argument("force: width must be > 0");
      const std::size_t ns = grid.spectral_size();
      auto d = out.data();
      for_each_mode(grid, [&](std::size_t idx, const ModeIndex& m, int, int, int) {
        if (m == ModeIndex{}) return;
        const Vec3 k = grid.wavevector(m);
        const double k2 = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
        const double phase =
            -(k[0] * center[0] + k[1] * center[1] + k[2] * center[2]);
        const Complex g = amplitude / grid.volume() *
                          std::exp(-0.5 * width * width * k2) *
                          Complex(std::cos(phase), std::sin(phase));
        for (int c = 0; c < 3; ++c) d[c * ns + idx] = direction[c] * g;
      });
      out.dealias();
      out.symmetrize();
      break;
    }
  }
  return out;
}

ForceSpec ForceSpec::scaled(double factor) const {
  ForceSpec out = *this;
  out.amplitude *= factor;
  out.cached_y_norm.reset();
  return out;
}

Trajectory force_response(const ForceSpec& f, const Grid& grid,
                          std::span<const double> times,
                          const QuadratureConfig& q) {
  validate_times(times);
  const SpectralField pf = leray_project(f.evaluate(grid, 0.0));
  if (pf.is_zero()) {
    Trajectory z = Trajectory::zeros(grid, {times.begin(), times.end()});
    for (std::size_t i = 0; i < z.size(); ++i) z.state(i).set_divergence_free(true);
    return z;
  }
  // Steady forces: the projected field is reused for every source sample.
  return duhamel_trajectory([&](double) { return pf; }, times, q);
}

YNormReport y_norm_of_response(const Trajectory& response) {
  YNormReport r;
  r.series.reserve(response.size());
  for (std::size_t i = 0; i < response.size(); ++i) {
    r.series.push_back(weak_l3_norm(response.state(i)));
  }
  const std::size_t head = std::max<std::size_t>(
      1, static_cast<std::size_t>(0.8 * static_cast<double>(r.series.size())));
  double head_sup = 0.0;
  for (std::size_t i = 0; i < r.series.size(); ++i) {
    if (r.series[i] > r.value) {
      r.value = r.series[i];
      r.argmax_time = response.times()[i];
    }
    if (i < head) head_sup = std::max(head_sup, r.series[i]);
  }
  r.saturated = r.value <= 1.01 * head_sup;
  return r;
}

YNormReport y_norm(ForceSpec& f, const Grid& grid, std::span<const double> times,
                   const QuadratureConfig& q) {
  YNormReport r = y_norm_of_response(force_response(f, grid, times, q));
  f.cached_y_norm = r.value;
  return r;
}

}  // namespace mildns
