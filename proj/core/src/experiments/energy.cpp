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

#include "mildns/experiments/energy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "mildns/spectral_ops.hpp"

namespace mildns::experiments {

EnergyReport energy_report(const Trajectory& omega, double t0, double exponent) {
  if (!(t0 > 0.0)) throw std::invalid_argument("energy: t0 must be > 0");
  EnergyReport r;
  r.t0 = t0;
  r.exponent = exponent;
  r.times = omega.times();
  const long i0 = find_time(r.times, t0);
  if (i0 < 0) throw std::invalid_argument("energy: t0 must be a sample time");
  std::vector<double> rate;
  for (const auto& s : omega.states()) {
    r.omega_l2_sq.push_back(s.l2_norm_sq());
    rate.push_back(s.h1_seminorm_sq());
  }
  double acc = 0.0;
  r.cumulative_dissipation.push_back(0.0);
  for (std::size_t i = 1; i < r.times.size(); ++i) {
    acc += 0.5 * (r.times[i] - r.times[i - 1]) * (rate[i] + rate[i - 1]);
    r.cumulative_dissipation.push_back(acc);
  }
  const double base = r.omega_l2_sq[i0];
  for (double t : r.times) {
    r.gronwall_bound.push_back(base * std::pow(std::max(t / t0, 1.0), exponent));
  }
  return r;
}

double trilinear_term(const SpectralField& a, const SpectralField& b,
                      const SpectralField& c) {
  const PhysicalField ap = a.to_physical();
  const PhysicalField cp = c.to_physical();
  const auto grad = velocity_gradient(b);
  const std::size_t np = a.grid().physical_size();
  double acc = 0.0;
  for (int i = 0; i < 3; ++i) {
    const auto ci = cp.component(i);
    for (int j = 0; j < 3; ++j) {
      const auto aj = ap.component(j);
      const auto dbij = grad[i].component(j);
      for (std::size_t x = 0; x < np; ++x) acc += aj[x] * dbij[x] * ci[x];
    }
  }
  return acc * a.grid().cell_volume();
}

}  // namespace mildns::experiments
