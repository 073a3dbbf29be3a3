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

#include "mildns/dyadic.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <utility>

namespace mildns {

double smooth_cutoff(double r) {
  if (r <= 1.0) return 1.0;
  if (r >= 2.0) return 0.0;
  const double x = std::log2(r);
  const double s = x * x * x * (10.0 - 15.0 * x + 6.0 * x * x);
  return 1.0 - s;
}

double band_multiplier(double k_magnitude, int j) {
  return smooth_cutoff(std::ldexp(k_magnitude, -j)) -
         smooth_cutoff(std::ldexp(k_magnitude, 1 - j));
}

BandRange band_range(const Grid& grid) {
  const double k_min = grid.k_unit();
  const double k_corner = grid.k_unit() * std::sqrt(3.0) * (grid.n() / 2);
  return {static_cast<int>(std::floor(std::log2(k_min))),
          static_cast<int>(std::ceil(std::log2(k_corner)))};
}

BandMultipliers::BandMultipliers(const Grid& grid) : range_(band_range(grid)) {
  tables_.resize(range_.count());
  for (int j = range_.j_min; j <= range_.j_max; ++j) {
    auto& t = tables_[j - range_.j_min];
    t.resize(grid.spectral_size());
    for_each_mode(grid, [&](std::size_t idx, const ModeIndex& m, int, int, int) {
      const Vec3 k = grid.wavevector(m);
      const double km = std::sqrt(k[0] * k[0] + k[1] * k[1] + k[2] * k[2]);
      t[idx] = m == ModeIndex{} ? 0.0 : band_multiplier(km, j);
    });
  }
}

const std::vector<double>& BandMultipliers::band(int j) const {
  if (!range_.contains(j)) {
    throw std::out_of_range("dyadic band " + std::to_string(j) +
                            " outside resolvable range [" +
                            std::to_string(range_.j_min) + ", " +
                            std::to_string(range_.j_max) + "]");
  }
  return tables_[j - range_.j_min];
}

const BandMultipliers& band_multipliers(const Grid& grid) {
  static std::mutex mutex;
  static std::map<std::pair<int, double>, std::unique_ptr<BandMultipliers>>
      cache;
  std::lock_guard lock(mutex);
  const auto key = std::make_pair(grid.n(), grid.box_length());
  auto it = cache.find(key);
  if (it == cache.end()) {
    it = cache.emplace(key, std::make_unique<BandMultipliers>(grid)).first;
  }
  return *it->second;
}

SpectralField dyadic_block(const SpectralField& u, int j) {
  const auto& table = band_multipliers(u.grid()).band(j);
  SpectralField out = u;
  const std::size_t ns = u.grid().spectral_size();
  auto d = out.data();
  for (int c = 0; c < 3; ++c) {
    for (std::size_t i = 0; i < ns; ++i) d[c * ns + i] *= table[i];
  }
  return out;
}

}  // namespace mildns
