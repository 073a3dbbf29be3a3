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

#include "mildns/norms.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <ostream>
#include <stdexcept>
#include <string>

namespace mildns {
namespace {

void require_exponent(double p, const char* what) {
  if (!(p >= 1.0)) {
    throw std::invalid_argument(std::string(what) + " must be >= 1");
  }
}

bool band_is_empty(const SpectralField& u, const std::vector<double>& table) {
  const std::size_t ns = u.grid().spectral_size();
  const auto d = u.data();
  for (int c = 0; c < 3; ++c) {
    for (std::size_t i = 0; i < ns; ++i) {
      if (table[i] != 0.0 && d[c * ns + i] != Complex{}) return false;
    }
  }
  return true;
}

std::size_t require_sample(std::span<const double> times, double t) {
  const long i = find_time(times, t);
  if (i < 0) {
    throw std::out_of_range("time norm: endpoint " + std::to_string(t) +
                            " is not a trajectory sample");
  }
  return static_cast<std::size_t>(i);
}

}  // namespace

void validate(const BesovIndex& idx) {
  require_exponent(idx.p, "Besov p");
  require_exponent(idx.q, "Besov q");
  if (!std::isfinite(idx.s)) throw std::invalid_argument("Besov s not finite");
}

double lp_norm(std::span<const double> magnitude, double cell_volume,
               double p) {
  require_exponent(p, "L^p exponent");
  double peak = 0.0;
  for (double v : magnitude) peak = std::max(peak, v);
  if (std::isinf(p) || peak == 0.0) return peak;
  double acc = 0.0;
  for (double v : magnitude) acc += std::pow(v / peak, p);
  return peak * std::pow(acc * cell_volume, 1.0 / p);
}

double lp_norm(const PhysicalField& u, double p) {
  const auto mag = u.magnitude();
  return lp_norm(mag, u.grid().cell_volume(), p);
}

double lp_norm(const SpectralField& u, double p) {
  return lp_norm(u.to_physical(), p);
}

std::vector<double> band_lp_norms(const SpectralField& u, double p) {
  const auto& bands = band_multipliers(u.grid());
  const BandRange r = bands.range();
  std::vector<double> out(r.count(), 0.0);
  if (u.is_zero()) return out;
  for (int j = r.j_min; j <= r.j_max; ++j) {
    if (band_is_empty(u, bands.band(j))) continue;
    out[j - r.j_min] = lp_norm(dyadic_block(u, j), p);
  }
  return out;
}

double besov_from_bands(std::span<const double> band_norms, int j_min,
                        double s, double q) {
  require_exponent(q, "Besov q");
  std::vector<double> w(band_norms.size());
  for (std::size_t b = 0; b < band_norms.size(); ++b) {
    w[b] = std::exp2(s * (j_min + static_cast<int>(b))) * band_norms[b];
  }
  return lp_norm(w, 1.0, q);
}

double besov_norm(const SpectralField& u, const BesovIndex& idx) {
  validate(idx);
  const auto bands = band_lp_norms(u, idx.p);
  return besov_from_bands(bands, band_range(u.grid()).j_min, idx.s, idx.q);
}

BandNormTable::BandNormTable(const Trajectory& traj, double p)
    : p_(p), times_(traj.times()), range_(band_range(traj.grid())) {
  require_exponent(p, "L^p exponent");
  norms_.reserve(traj.size());
  for (std::size_t i = 0; i < traj.size(); ++i) {
    norms_.push_back(band_lp_norms(traj.state(i), p));
  }
}

double BandNormTable::at(std::size_t time_index, int j) const {
  if (!range_.contains(j)) throw std::out_of_range("band out of range");
  return norms_.at(time_index)[j - range_.j_min];
}

double time_lebesgue_norm(std::span<const double> times,
                          std::span<const double> g, std::size_t i0,
                          std::size_t i1, double rho) {
  require_exponent(rho, "time exponent");
  double peak = 0.0;
  for (std::size_t i = i0; i <= i1; ++i) peak = std::max(peak, g[i]);
  if (std::isinf(rho) || peak == 0.0) return peak;
  double acc = 0.0;
  for (std::size_t i = i0; i < i1; ++i) {
    const double a = std::pow(g[i] / peak, rho);
    const double b = std::pow(g[i + 1] / peak, rho);
    acc += 0.5 * (times[i + 1] - times[i]) * (a + b);
  }
  return peak * std::pow(acc, 1.0 / rho);
}

double BandNormTable::time_besov_norm(const TimeNormSpec& spec) const {
  validate(spec.besov);
  if (spec.besov.p != p_) {
    throw std::invalid_argument("time norm: table built for another p");
  }
  if (!(spec.t1 < spec.t2)) {
    throw std::invalid_argument("time norm: need t1 < t2");
  }
  const std::size_t i0 = require_sample(times_, spec.t1);
  const std::size_t i1 = require_sample(times_, spec.t2);
  std::vector<double> per_band(range_.count());
  std::vector<double> g(times_.size());
  for (int b = 0; b < range_.count(); ++b) {
    for (std::size_t i = i0; i <= i1; ++i) g[i] = norms_[i][b];
    per_band[b] = time_lebesgue_norm(times_, g, i0, i1, spec.rho);
  }
  return besov_from_bands(per_band, range_.j_min, spec.besov.s, spec.besov.q);
}

double time_besov_norm(const Trajectory& traj, const TimeNormSpec& spec) {
  return BandNormTable(traj, spec.besov.p).time_besov_norm(spec);
}

double lorentz_norm(std::span<const double> magnitude, double cell_volume,
                    double p, double q) {
  if (!(p > 1.0) || std::isinf(p)) {
    throw std::invalid_argument("Lorentz p must lie in (1, inf)");
  }
  require_exponent(q, "Lorentz q");
  std::vector<double> f(magnitude.begin(), magnitude.end());
  std::sort(f.begin(), f.end(), std::greater<>());
  if (f.empty() || f.front() == 0.0) return 0.0;
  if (std::isinf(q)) {
    double best = 0.0;
    for (std::size_t m = 0; m < f.size(); ++m) {
      const double vm = cell_volume * static_cast<double>(m + 1);
      best = std::max(best, std::pow(vm, 1.0 / p) * f[m]);
    }
    return best;
  }
  const double peak = f.front();
  double acc = 0.0;
  double prev = 0.0;
  for (std::size_t m = 0; m < f.size(); ++m) {
    const double vm = std::pow(cell_volume * static_cast<double>(m + 1), q / p);
    acc += std::pow(f[m] / peak, q) * (vm - prev);
    prev = vm;
  }
  return peak * std::pow(acc, 1.0 / q);
}

double lorentz_norm(const SpectralField& u, double p, double q) {
  const auto mag = u.to_physical().magnitude();
  return lorentz_norm(mag, u.grid().cell_volume(), p, q);
}

double weak_l3_norm(const SpectralField& u) { return lorentz_norm(u, 3.0, kInf); }

double kato_norm(const Trajectory& traj, double p) {
  if (!(p >= 3.0)) throw std::invalid_argument("Kato norm needs p >= 3");
  const double a = 0.5 - 1.5 / p;
  double best = 0.0;
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const double t = traj.times()[i];
    const double w = a == 0.0 ? 1.0 : std::pow(t, a);
    if (w == 0.0) continue;
    best = std::max(best, w * lp_norm(traj.state(i), p));
  }
  return best;
}

EmbeddingReport embedding_report(const SpectralField& u, double q1,
                                 double q2) {
  if (!(q1 >= 1.0 && q1 < 3.0 && q2 > 3.0)) {
    throw std::invalid_argument("embedding: need 1 <= q1 < 3 < q2");
  }
  EmbeddingReport r;
  const double weak = weak_l3_norm(u);
  const double lo = besov_norm(u, BesovIndex::critical(q1, kInf));
  const double hi = besov_norm(u, BesovIndex::critical(q2, kInf));
  if (weak == 0.0 || lo == 0.0) return r;
  r.lower_ratio = weak / lo;
  r.upper_ratio = hi / weak;
  r.valid = true;
  return r;
}

double contraction_norm(const BandNormTable& table, double t_end) {
  const double p = table.p();
  const double r0 = contraction_exponent(p);
  const double sp = critical_regularity(p);
  const TimeNormSpec strong{{sp + 2.0 / r0, p, p}, r0, 0.0, t_end};
  const TimeNormSpec sup{{sp, p, p}, kInf, 0.0, t_end};
  return std::max(table.time_besov_norm(strong), table.time_besov_norm(sup));
}

double contraction_norm(const Trajectory& traj, double p, double t_end) {
  return contraction_norm(BandNormTable(traj, p), t_end);
}

double contraction_norm(const Trajectory& traj, double p) {
  return contraction_norm(traj, p, traj.end_time());
}

void write_norm_csv(std::ostream& out, std::span<const NormRecord> rows) {
  const auto old_precision = out.precision(17);
  out << kNormCsvHeader << '\n';
  for (const auto& r : rows) {
    out << r.kind << ',' << r.s << ',' << r.p << ',' << r.q << ',' << r.rho
        << ',' << r.t1 << ',' << r.t2 << ',' << r.value << '\n';
  }
  out.precision(old_precision);
}

}  // namespace mildns
