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

#include <iosfwd>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "mildns/dyadic.hpp"
#include "mildns/trajectory.hpp"

namespace mildns {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Critical regularity s_p = -1 + 3/p.
inline double critical_regularity(double p) { return -1.0 + 3.0 / p; }

/// Time exponent r₀ = 2p/(p - 1) of the contraction norm.
inline double contraction_exponent(double p) { return 2.0 * p / (p - 1.0); }

/// (s, p, q) of a homogeneous Besov norm; p and q may be kInf.
struct BesovIndex {
  double s = 0.0;
  double p = 2.0;
  double q = 2.0;

  static BesovIndex critical(double p, double q) {
    return {critical_regularity(p), p, q};
  }
};

void validate(const BesovIndex& idx);

/// Chemin–Lerner norm L̃^ρ([t1, t2], Ḃ^s_{p,q}).
struct TimeNormSpec {
  BesovIndex besov;
  double rho = kInf;
  double t1 = 0.0;
  double t2 = 0.0;
};

/// (Σ_x |u(x)|^p dV)^{1/p} over grid points; the grid max for p = ∞.
double lp_norm(std::span<const double> magnitude, double cell_volume, double p);
double lp_norm(const PhysicalField& u, double p);
double lp_norm(const SpectralField& u, double p);

/// ‖Δ_j u‖_{L^p} for j = j_min..j_max (index j - j_min).
std::vector<double> band_lp_norms(const SpectralField& u, double p);

/// ‖2^{js}‖Δ_j u‖_{L^p}‖_{ℓ^q} over the resolvable bands.
double besov_norm(const SpectralField& u, const BesovIndex& idx);
/// Same sum from precomputed band norms.
double besov_from_bands(std::span<const double> band_norms, int j_min,
                        double s, double q);

/// Band L^p norms of every trajectory sample, computed once and reused for
/// all time norms with that p.
class BandNormTable {
 public:
  BandNormTable(const Trajectory& traj, double p);

  double p() const { return p_; }
  const std::vector<double>& times() const { return times_; }
  const BandRange& range() const { return range_; }
  /// ‖Δ_j u(t_i)‖_{L^p}.
  double at(std::size_t time_index, int j) const;

  /// Chemin–Lerner norm; spec.besov.p must equal p().
  double time_besov_norm(const TimeNormSpec& spec) const;

 private:
  double p_;
  std::vector<double> times_;
  BandRange range_;
  std::vector<std::vector<double>> norms_;
};

/// Trapezoid L^ρ norm of samples g over times[i0..i1]; max for ρ = ∞.
double time_lebesgue_norm(std::span<const double> times,
                          std::span<const double> g, std::size_t i0,
                          std::size_t i1, double rho);

double time_besov_norm(const Trajectory& traj, const TimeNormSpec& spec);

/// Lorentz L^{p,q} norm of |u| sampled on the grid, through the decreasing
/// rearrangement f*_1 >= f*_2 >= ... with cumulative volume V_m = m·dV:
///   q = ∞:  max_m V_m^{1/p} f*_m
///   q < ∞:  (Σ_m f*_m^q (V_m^{q/p} - V_{m-1}^{q/p}))^{1/q}
/// The q < ∞ sum is the exact norm of the step function, normalised so
/// that L^{p,p} = L^p.
double lorentz_norm(std::span<const double> magnitude, double cell_volume,
                    double p, double q);
double lorentz_norm(const SpectralField& u, double p, double q);
double weak_l3_norm(const SpectralField& u);

/// sup_i t_i^{1/2 - 3/(2p)} ‖u(t_i)‖_{L^p}, p >= 3.
double kato_norm(const Trajectory& traj, double p);

/// Ratios weak-L³ / ‖u‖_{Ḃ^{s_q1}_{q1,∞}} and ‖u‖_{Ḃ^{s_q2}_{q2,∞}} / weak-L³
/// for q1 < 3 < q2; `valid` is false for the zero field.
struct EmbeddingReport {
  double lower_ratio = 0.0;
  double upper_ratio = 0.0;
  bool valid = false;
};
EmbeddingReport embedding_report(const SpectralField& u, double q1, double q2);

/// max(‖u‖_{L̃^{r₀} Ḃ^{s_p + 2/r₀}_{p,p}}, ‖u‖_{L̃^∞ Ḃ^{s_p}_{p,p}}) on
/// [0, t_end], r₀ = 2p/(p - 1).
double contraction_norm(const BandNormTable& table, double t_end);
double contraction_norm(const Trajectory& traj, double p, double t_end);
double contraction_norm(const Trajectory& traj, double p);

/// One exported norm evaluation.
struct NormRecord {
  std::string kind;
  double s = 0.0;
  double p = 0.0;
  double q = 0.0;
  double rho = 0.0;
  double t1 = 0.0;
  double t2 = 0.0;
  double value = 0.0;
};

inline constexpr const char* kNormCsvHeader = "norm_kind,s,p,q,rho,t1,t2,value";
void write_norm_csv(std::ostream& out, std::span<const NormRecord> rows);

}  // namespace mildns
