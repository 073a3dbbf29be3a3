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

#include <cmath>
#include <map>

#include "mildns/fft.hpp"
#include "mildns/fields.hpp"
#include "mildns/spectral_ops.hpp"
#include "test_support.hpp"

using namespace mildns;
using mildns::testing::Gen;
using mildns::testing::max_mode;
using mildns::testing::max_mode_diff;

TEST(Grid, RejectsOddOrTinyGrids) {
  EXPECT_THROW(make_grid(7, 1.0), std::invalid_argument);
  EXPECT_THROW(make_grid(6, 1.0), std::invalid_argument);
  EXPECT_THROW(make_grid(8, 0.0), std::invalid_argument);
  EXPECT_NO_THROW(make_grid(8, 2.0));
}

TEST(Grid, DealiasCutoffFollowsTwoThirdsRule) {
  EXPECT_EQ(make_grid(8, 1.0).dealias_cutoff(), 2);
  EXPECT_EQ(make_grid(32, 1.0).dealias_cutoff(), 10);
  EXPECT_EQ(make_grid(64, 1.0).dealias_cutoff(), 21);
}

TEST(Fft, SingleModeMatchesPointEvaluation) {
  const Grid g = make_grid(16, 3.0);
  const ModeIndex m{2, -1, 3};
  const Vec3 a{0.3, -0.7, 0.1};
  const Vec3 b{-0.2, 0.4, 0.5};
  const PhysicalField p = single_mode_field(g, m, a, b).to_physical();
  const auto k = g.wavevector(m);
  const double h = g.box_length() / g.n();
  double worst = 0.0;
  for (int i = 0; i < g.n(); ++i) {
    for (int j = 0; j < g.n(); ++j) {
      for (int l = 0; l < g.n(); ++l) {
        const double phase = k[0] * i * h + k[1] * j * h + k[2] * l * h;
        const std::size_t x = (static_cast<std::size_t>(i) * g.n() + j) * g.n() + l;
        for (int c = 0; c < 3; ++c) {
          const double expect = a[c] * std::cos(phase) + b[c] * std::sin(phase);
          worst = std::max(worst, std::abs(p.component(c)[x] - expect));
        }
      }
    }
  }
  EXPECT_LT(worst, 1e-13);
}

TEST(Fft, RoundTripIsIdentityOnResolvedFields) {
  Gen gen(5);
  for (int trial = 0; trial < 5; ++trial) {
    const Grid g = gen.grid();
    const SpectralField u = gen.field(g);
    const SpectralField back = SpectralField::from_physical(u.to_physical());
    EXPECT_LT(max_mode_diff(u, back), 1e-13 * max_mode(u));
  }
}

TEST(Leray, MatchesPerModeProjectionMatrix) {
  Gen gen(9);
  const Grid g = make_grid(12, 5.0);
  const SpectralField u = gen.rough_field(g);
  const SpectralField pu = leray_project(u);
  double worst = 0.0;
  for_each_mode(g, [&](std::size_t, const ModeIndex& m, int, int, int) {
    if (m == ModeIndex{}) return;
    const auto k = g.wavevector(m);
    const double k2 = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
    const CVec3 in = u.mode(m);
    const CVec3 out = pu.mode(m);
    for (int r = 0; r < 3; ++r) {
      std::complex<double> expect = 0.0;
      for (int c = 0; c < 3; ++c) {
        const double P = (r == c ? 1.0 : 0.0) - k[r] * k[c] / k2;
        expect += P * in[c];
      }
      worst = std::max(worst, std::abs(expect - out[r]));
    }
  });
  EXPECT_LT(worst, 1e-14 * std::max(1.0, max_mode(u)));
  EXPECT_LT(pu.divergence_defect(), 1e-14);
}

// Dense convolution oracle on 8^3 for (1/2) P div(u (x) v + v (x) u).
TEST(NonlinearTerm, MatchesDenseConvolutionOn8Cubed) {
  Gen gen(17);
  const Grid g = make_grid(8, 2.0 * std::numbers::pi * 0.75);
  const SpectralField u = gen.field(g);
  const SpectralField v = gen.field(g);
  const SpectralField got = nonlinear_term(u, v);

  const int c = g.dealias_cutoff();
  std::vector<ModeIndex> modes;
  for (int x = -c; x <= c; ++x)
    for (int y = -c; y <= c; ++y)
      for (int z = -c; z <= c; ++z) modes.push_back({x, y, z});

  double worst = 0.0;
  const std::complex<double> I(0.0, 1.0);
  for (const auto& k : modes) {
    // w_i(k) = i k_j sum_{p+q=k} (u_i(p) v_j(q) + v_i(p) u_j(q)) / 2
    CVec3 w{};
    const auto kv = g.wavevector(k);
    for (const auto& p : modes) {
      const ModeIndex q{k.x - p.x, k.y - p.y, k.z - p.z};
      if (std::abs(q.x) > c || std::abs(q.y) > c || std::abs(q.z) > c) continue;
      const CVec3 up = u.mode(p), vp = v.mode(p), uq = u.mode(q), vq = v.mode(q);
      for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
          w[i] += 0.5 * I * kv[j] * (up[i] * vq[j] + vp[i] * uq[j]);
        }
      }
    }
    const double k2 = kv[0] * kv[0] + kv[1] * kv[1] + kv[2] * kv[2];
    CVec3 pw{};
    for (int r = 0; r < 3; ++r) {
      for (int s = 0; s < 3; ++s) {
        const double P = k2 == 0.0 ? 0.0 : (r == s ? 1.0 : 0.0) - kv[r] * kv[s] / k2;
        pw[r] += P * w[s];
      }
    }
    const CVec3 out = got.mode(k);
    for (int r = 0; r < 3; ++r) worst = std::max(worst, std::abs(out[r] - pw[r]));
  }
  EXPECT_LT(worst, 1e-13);

  // Outside the 2/3 cube the output is zero.
  double outside = 0.0;
  for_each_mode(g, [&](std::size_t, const ModeIndex& m, int, int, int) {
    if (std::abs(m.x) <= c && std::abs(m.y) <= c && std::abs(m.z) <= c) return;
    const CVec3 z = got.mode(m);
    for (const auto& e : z) outside = std::max(outside, std::abs(e));
  });
  EXPECT_EQ(outside, 0.0);
}

TEST(NonlinearTerm, IsBitwiseSymmetric) {
  Gen gen(21);
  const Grid g = make_grid(16, 4.0);
  const SpectralField u = gen.field(g);
  const SpectralField v = gen.field(g);
  EXPECT_EQ(max_mode_diff(nonlinear_term(u, v), nonlinear_term(v, u)), 0.0);
}

TEST(NonlinearTerm, ShearModeIsExactSteadySolution) {
  const Grid g = make_grid(16, 2.0 * std::numbers::pi);
  const SpectralField u = single_mode_field(g, {1, 0, 0}, {0.0, 1.0, 0.0});
  EXPECT_LT(max_mode(nonlinear_term(u, u)), 1e-15);
}

TEST(Rescale, MatchedBoxMovesModesAndScalesAmplitude) {
  const Grid g = make_grid(16, 2.0);
  const SpectralField u = single_mode_field(g, {1, 2, 0}, {0.5, -0.25, 0.0});
  const auto r = rescale_field(u, 1);
  EXPECT_EQ(r.truncated_fraction, 0.0);
  EXPECT_DOUBLE_EQ(r.field.grid().box_length(), 1.0);
  // Same lattice index, physical wavevector doubled, amplitude doubled.
  const CVec3 a = u.mode({1, 2, 0});
  const CVec3 b = r.field.mode({1, 2, 0});
  for (int c = 0; c < 3; ++c) EXPECT_NEAR(std::abs(b[c]), 2.0 * std::abs(a[c]), 1e-15);
}

TEST(Rescale, FixedBoxReportsTruncation) {
  const Grid g = make_grid(16, 2.0);
  const SpectralField u = single_mode_field(g, {4, 0, 0}, {0.0, 1.0, 0.0});
  const auto r = rescale_field(u, 1, RescaleMode::fixed_box);
  EXPECT_GT(r.truncated_fraction, 0.99);
  const SpectralField w = single_mode_field(g, {1, 0, 0}, {0.0, 1.0, 0.0});
  const auto r2 = rescale_field(w, 1, RescaleMode::fixed_box);
  EXPECT_EQ(r2.truncated_fraction, 0.0);
  EXPECT_NEAR(std::abs(r2.field.mode({2, 0, 0})[1]), 2.0 * std::abs(w.mode({1, 0, 0})[1]),
              1e-15);
}

TEST(Fields, TaylorGreenIsDivergenceFreeAndMatchesFormula) {
  const Grid g = make_grid(16, 2.0 * std::numbers::pi);
  const SpectralField u = taylor_green_field(g, 1.5, 2);
  EXPECT_LT(u.divergence_defect(), 1e-15);
  const PhysicalField p = u.to_physical();
  const double h = g.box_length() / g.n();
  double worst = 0.0;
  for (int i = 0; i < g.n(); i += 3) {
    for (int j = 0; j < g.n(); j += 5) {
      for (int l = 0; l < g.n(); l += 7) {
        const std::size_t x = (static_cast<std::size_t>(i) * g.n() + j) * g.n() + l;
        const double X = 2 * i * h, Y = 2 * j * h, Z = 2 * l * h;
        worst = std::max(worst, std::abs(p.component(0)[x] -
                                         1.5 * std::sin(X) * std::cos(Y) * std::cos(Z)));
        worst = std::max(worst, std::abs(p.component(1)[x] +
                                         1.5 * std::cos(X) * std::sin(Y) * std::cos(Z)));
      }
    }
  }
  EXPECT_LT(worst, 1e-13);
}

TEST(Fft, ThreadCountIsConfigurable) {
  configure_fft_threads(1);
  EXPECT_EQ(fft_threads(), 1);
}
