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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "mildns/dyadic.hpp"
#include "mildns/fields.hpp"
#include "mildns/norms.hpp"
#include "mildns/semigroup.hpp"
#include "mildns/spectral_ops.hpp"
#include "test_support.hpp"

using namespace mildns;
using mildns::testing::Gen;
using mildns::testing::max_mode;
using mildns::testing::max_mode_diff;

namespace {

// Layer-cake oracle: ‖f‖_{p,q}^q = q ∫ s^{q-1} μ(s)^{q/p} ds with μ(s) the
// measure of {f > s}; for a step distribution the integral is a finite sum.
double lorentz_oracle(std::vector<double> f, double dV, double p, double q) {
  std::vector<double> levels = f;
  std::sort(levels.begin(), levels.end(), std::greater<>());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
  if (levels.empty() || levels.front() <= 0.0) return 0.0;
  auto mu_at = [&](double v) {
    double count = 0.0;
    for (double x : f) count += x >= v ? 1.0 : 0.0;
    return count * dV;
  };
  if (std::isinf(q)) {
    double best = 0.0;
    for (double v : levels) {
      if (v > 0.0) best = std::max(best, v * std::pow(mu_at(v), 1.0 / p));
    }
    return best;
  }
  double acc = 0.0;
  for (std::size_t k = 0; k < levels.size(); ++k) {
    const double hi = levels[k];
    const double lo = k + 1 < levels.size() ? std::max(levels[k + 1], 0.0) : 0.0;
    if (hi <= 0.0) break;
    acc += std::pow(mu_at(hi), q / p) * (std::pow(hi, q) - std::pow(lo, q));
  }
  return std::pow(acc, 1.0 / q);
}

// Mean of |cos|^p over a period.
double cos_moment(double p) {
  return std::tgamma((p + 1.0) / 2.0) /
         (std::sqrt(std::numbers::pi) * std::tgamma(p / 2.0 + 1.0));
}

}  // namespace

TEST(Dyadic, CutoffShape) {
  EXPECT_EQ(smooth_cutoff(0.3), 1.0);
  EXPECT_EQ(smooth_cutoff(1.0), 1.0);
  EXPECT_EQ(smooth_cutoff(2.0), 0.0);
  EXPECT_NEAR(smooth_cutoff(std::sqrt(2.0)), 0.5, 1e-15);
  double prev = 1.0;
  for (double r = 1.0; r <= 2.0; r += 0.01) {
    EXPECT_LE(smooth_cutoff(r), prev + 1e-15);
    prev = smooth_cutoff(r);
  }
}

TEST(Dyadic, BandMultiplierSupport) {
  for (int j = -3; j <= 5; ++j) {
    const double c = std::ldexp(1.0, j);
    EXPECT_EQ(band_multiplier(0.49 * c, j), 0.0);
    EXPECT_EQ(band_multiplier(2.01 * c, j), 0.0);
    EXPECT_NEAR(band_multiplier(c, j), 1.0, 1e-15);
  }
}

TEST(Dyadic, PartitionOfUnityOnLattice) {
  for (double L : {1.0, 2.0 * std::numbers::pi, 7.3}) {
    const Grid g = make_grid(16, L);
    const auto& bm = band_multipliers(g);
    double worst = 0.0;
    for_each_mode(g, [&](std::size_t idx, const ModeIndex& m, int, int, int) {
      double s = 0.0;
      for (int j = bm.range().j_min; j <= bm.range().j_max; ++j) s += bm.band(j)[idx];
      worst = std::max(worst, std::abs(s - (m == ModeIndex{} ? 0.0 : 1.0)));
    });
    EXPECT_LT(worst, 1e-14) << "L = " << L;
  }
}

TEST(Dyadic, BlocksSumToField) {
  Gen gen(3);
  const Grid g = make_grid(16, 3.0);
  const SpectralField u = gen.field(g);
  SpectralField acc(g);
  const auto r = band_range(g);
  for (int j = r.j_min; j <= r.j_max; ++j) acc += dyadic_block(u, j);
  EXPECT_LT(max_mode_diff(acc, u), 1e-14 * max_mode(u));
  EXPECT_THROW(dyadic_block(u, r.j_max + 1), std::out_of_range);
}

TEST(Lorentz, MatchesLayerCakeOracle) {
  std::mt19937_64 rng(77);
  std::exponential_distribution<double> ex(1.0);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> f(50 + trial * 7);
    for (double& x : f) x = ex(rng);
    // Repeated values exercise ties.
    for (std::size_t i = 0; i + 3 < f.size(); i += 4) f[i + 1] = f[i];
    const double dV = 0.37;
    for (double p : {1.5, 3.0, 4.0}) {
      for (double q : {1.0, 2.0, 3.0, 6.0, kInf}) {
        const double got = lorentz_norm(f, dV, p, q);
        const double want = lorentz_oracle(f, dV, p, q);
        EXPECT_NEAR(got, want, 1e-12 * want) << "p=" << p << " q=" << q;
      }
    }
  }
}

TEST(Lorentz, DiagonalEqualsLebesgue) {
  Gen gen(4);
  const Grid g = make_grid(12, 2.0);
  const SpectralField u = gen.field(g);
  for (double p : {2.0, 3.0, 4.5}) {
    EXPECT_NEAR(lorentz_norm(u, p, p), lp_norm(u, p), 1e-12 * lp_norm(u, p));
  }
}

TEST(Lorentz, WeakL3OfIndicatorLikeField) {
  // Single value c on a set of measure V: weak norm c·V^{1/3}.
  std::vector<double> f(64, 0.0);
  for (int i = 0; i < 10; ++i) f[i] = 2.0;
  EXPECT_NEAR(lorentz_norm(f, 0.5, 3.0, kInf), 2.0 * std::cbrt(5.0), 1e-14);
}

TEST(Lebesgue, SingleModeMatchesCosMoment) {
  const double L = 3.0;
  const Grid g = make_grid(16, L);
  const SpectralField u = single_mode_field(g, {1, 0, 0}, {0.0, 0.8, 0.0});
  for (double p : {2.0, 4.0, 6.0}) {
    const double want = 0.8 * std::pow(L * L * L * cos_moment(p), 1.0 / p);
    EXPECT_NEAR(lp_norm(u, p), want, 1e-13 * want);
  }
}

TEST(Besov, SingleModeMatchesBandOracle) {
  const double L = 2.0 * std::numbers::pi;
  const Grid g = make_grid(16, L);
  const ModeIndex m{2, 1, 0};
  const SpectralField u = single_mode_field(g, m, {0.0, 0.0, 1.3});
  const double kmag = std::sqrt(5.0);
  const double p = 4.0;
  const double up = lp_norm(u, p);
  for (const BesovIndex idx : {BesovIndex::critical(4.0, 4.0), BesovIndex{0.5, 4.0, 2.0},
                               BesovIndex{-0.25, 4.0, kInf}}) {
    const auto r = band_range(g);
    double acc = 0.0, sup = 0.0;
    for (int j = r.j_min; j <= r.j_max; ++j) {
      const double b = std::pow(2.0, j * idx.s) *
                       band_multiplier(kmag, j) * up;
      acc += std::isinf(idx.q) ? 0.0 : std::pow(b, idx.q);
      sup = std::max(sup, b);
    }
    const double want = std::isinf(idx.q) ? sup : std::pow(acc, 1.0 / idx.q);
    EXPECT_NEAR(besov_norm(u, idx), want, 1e-13 * want);
  }
}

TEST(Besov, ValidatesIndex) {
  EXPECT_THROW(validate(BesovIndex{0.0, 0.5, 1.0}), std::invalid_argument);
  EXPECT_THROW(validate(BesovIndex{0.0, 2.0, 0.0}), std::invalid_argument);
  EXPECT_NO_THROW(validate(BesovIndex::critical(4.0, kInf)));
}

TEST(Besov, CriticalNormScalingInvarianceOnMatchedBox) {
  Gen gen(8);
  const Grid g = make_grid(32, 2.0 * std::numbers::pi);
  for (int i = 0; i < 4; ++i) {
    const SpectralField u = random_banded_field(g, gen.seed(), 1.0, 8.0);
    for (double p : {4.0, 6.0}) {
      const auto idx = BesovIndex::critical(p, p);
      const double a = besov_norm(u, idx);
      const double b = besov_norm(rescale_field(u, 1).field, idx);
      EXPECT_LE(std::abs(a - b) / a, 1e-12);
    }
  }
}

TEST(HeatFlow, BesovDecayIsMonotone) {
  Gen gen(10);
  const Grid g = make_grid(16, 2.0 * std::numbers::pi);
  const auto idx = BesovIndex::critical(4.0, 4.0);
  for (int i = 0; i < 3; ++i) {
    const SpectralField u = gen.field(g);
    double prev = besov_norm(u, idx);
    for (double t : geometric_times(1e-3, 10.0, 15)) {
      if (t == 0.0) continue;
      const double b = besov_norm(heat_flow(u, t), idx);
      EXPECT_LE(b, prev * (1.0 + 1e-14));
      prev = b;
    }
  }
}

TEST(TimeNorms, ConstantTrajectoryOracle) {
  Gen gen(12);
  const Grid g = make_grid(12, 2.0);
  const SpectralField u = gen.field(g);
  const double T = 0.7;
  const Trajectory tr = Trajectory::constant(u, uniform_times(T, 5));
  const double p = 4.0;
  const double sp = critical_regularity(p);
  const double r0 = contraction_exponent(p);
  const double lower = besov_norm(u, {sp + 2.0 / r0, p, p});
  const double upper = besov_norm(u, {sp, p, p});
  const double cl = time_besov_norm(tr, {{sp + 2.0 / r0, p, p}, r0, 0.0, T});
  EXPECT_NEAR(cl, std::pow(T, 1.0 / r0) * lower, 1e-12 * cl);
  EXPECT_NEAR(time_besov_norm(tr, {{sp, p, p}, kInf, 0.0, T}), upper, 1e-12 * upper);
  EXPECT_NEAR(contraction_norm(tr, p), std::max(cl, upper), 1e-12 * upper);
  EXPECT_THROW(time_besov_norm(tr, {{sp, p, p}, 2.0, 0.0, 0.33}), std::out_of_range);
}

TEST(TimeNorms, CheminLernerMinkowskiOrdering) {
  Gen gen(13);
  const Grid g = make_grid(12, 2.0);
  const SpectralField u = gen.field(g);
  const auto times = geometric_times(0.01, 1.0, 10);
  const Trajectory tr = heat_flow_trajectory(u, times);
  const BesovIndex b{-0.25, 4.0, 2.0};
  std::vector<double> per_time;
  for (const auto& s : tr.states()) per_time.push_back(besov_norm(s, b));
  // rho = 4 >= q = 2: L^rho(B) <= L~^rho B.
  const double tilde = time_besov_norm(tr, {b, 4.0, 0.0, 1.0});
  const double outer = time_lebesgue_norm(times, per_time, 0, times.size() - 1, 4.0);
  EXPECT_GE(tilde, outer * (1.0 - 1e-12));
  // rho = 1 <= q = 2: reversed.
  const double tilde1 = time_besov_norm(tr, {b, 1.0, 0.0, 1.0});
  const double outer1 = time_lebesgue_norm(times, per_time, 0, times.size() - 1, 1.0);
  EXPECT_LE(tilde1, outer1 * (1.0 + 1e-12));
}

TEST(Kato, HeatFlowSingleModeOracle) {
  const Grid g = make_grid(16, 2.0 * std::numbers::pi);
  const SpectralField u = single_mode_field(g, {3, 0, 0}, {0.0, 1.0, 0.0});
  const auto times = geometric_times(0.001, 2.0, 20);
  const Trajectory tr = heat_flow_trajectory(u, times);
  const double p = 4.0;
  const double up = lp_norm(u, p);
  double want = 0.0;
  for (double t : times) {
    want = std::max(want, std::pow(t, 0.5 - 1.5 / p) * std::exp(-9.0 * t) * up);
  }
  EXPECT_NEAR(kato_norm(tr, p), want, 1e-12 * want);
}

TEST(Embedding, RatiosArePositiveAndFinite) {
  Gen gen(14);
  const Grid g = make_grid(16, 2.0 * std::numbers::pi);
  for (int i = 0; i < 3; ++i) {
    const auto r = embedding_report(gen.field(g), 2.0, 4.0);
    EXPECT_TRUE(r.valid);
    EXPECT_GT(r.lower_ratio, 0.0);
    EXPECT_GT(r.upper_ratio, 0.0);
    EXPECT_TRUE(std::isfinite(r.lower_ratio) && std::isfinite(r.upper_ratio));
  }
  EXPECT_FALSE(embedding_report(SpectralField(g), 2.0, 4.0).valid);
  EXPECT_THROW(embedding_report(SpectralField(g), 3.0, 4.0), std::invalid_argument);
}
