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

#include "mildns/force.hpp"
#include "mildns/norms.hpp"
#include "mildns/spectral_ops.hpp"
#include "test_support.hpp"

using namespace mildns;
using mildns::testing::max_mode;

namespace {

const QuadratureConfig kQuad{4, QuadratureScheme::integrating_factor_trapezoid};

ForceSpec shear(double amplitude) {
  ForceSpec f;
  f.kind = ForceKind::time_independent_mode_sum;
  f.amplitude = amplitude;
  f.modes.push_back({{1, 0, 0}, {0.0, 1.0, 0.0}, {}});
  return f;
}

}  // namespace

TEST(Force, KindNamesRoundTrip) {
  for (ForceKind k : {ForceKind::zero, ForceKind::gradient_of_profile,
                      ForceKind::time_independent_mode_sum,
                      ForceKind::scaled_dirac_surrogate}) {
    EXPECT_EQ(force_kind_from_string(to_string(k)), k);
  }
  EXPECT_THROW(force_kind_from_string("vortex"), std::invalid_argument);
}

TEST(Force, ZeroForceHasZeroResponse) {
  const Grid g = make_grid(8, 2.0 * std::numbers::pi);
  ForceSpec f;
  const auto times = uniform_times(1.0, 4);
  const Trajectory r = force_response(f, g, times, kQuad);
  EXPECT_TRUE(r.is_zero());
  EXPECT_EQ(y_norm(f, g, times, kQuad).value, 0.0);
  EXPECT_EQ(f.cached_y_norm.value(), 0.0);
}

TEST(Force, GradientIsRemovedByProjection) {
  const Grid g = make_grid(16, 2.0 * std::numbers::pi);
  ForceSpec f;
  f.kind = ForceKind::gradient_of_profile;
  f.amplitude = 3.0;
  f.width = 0.7;
  f.center = {1.0, 2.0, 3.0};
  EXPECT_GT(max_mode(f.evaluate(g, 0.0)), 1e-3);
  const Trajectory r = force_response(f, g, uniform_times(1.0, 4), kQuad);
  double worst = 0.0;
  for (const auto& s : r.states()) worst = std::max(worst, max_mode(s));
  EXPECT_LT(worst, 1e-15);
}

TEST(Force, LongitudinalModeIsAGradient) {
  const Grid g = make_grid(8, 2.0 * std::numbers::pi);
  ForceSpec f;
  f.kind = ForceKind::time_independent_mode_sum;
  f.modes.push_back({{1, 0, 0}, {1.0, 0.0, 0.0}, {}});
  EXPECT_TRUE(leray_project(f.evaluate(g, 0.0)).max_abs() < 1e-16);
}

TEST(Force, SingleModeResponseClosedForm) {
  const Grid g = make_grid(8, 2.0 * std::numbers::pi);
  const double A = 0.4;
  const ForceSpec f = shear(A);
  const auto times = geometric_times(0.01, 3.0, 8);
  const Trajectory r = force_response(f, g, times, kQuad);
  const double f_hat = f.evaluate(g, 0.0).mode({1, 0, 0})[1].real();
  EXPECT_NEAR(f_hat, A / 2.0, 1e-15);
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double want = (1.0 - std::exp(-times[i])) * f_hat;
    EXPECT_NEAR(r.state(i).mode({1, 0, 0})[1].real(), want, 1e-15);
  }
}

TEST(Force, YNormIsSupOfWeakL3AndDetectsSaturation) {
  const Grid g = make_grid(16, 2.0 * std::numbers::pi);
  ForceSpec f = shear(1.0);
  // The response grows like 1 - e^{-t}: flat after t ~ 10, still rising at 0.1.
  const auto long_times = uniform_times(20.0, 20);
  const YNormReport y = y_norm(f, g, long_times, kQuad);
  const Trajectory r = force_response(f, g, long_times, kQuad);
  double sup = 0.0;
  for (const auto& s : r.states()) sup = std::max(sup, weak_l3_norm(s));
  EXPECT_DOUBLE_EQ(y.value, sup);
  EXPECT_EQ(y.series.size(), long_times.size());
  EXPECT_TRUE(y.saturated);
  EXPECT_DOUBLE_EQ(f.cached_y_norm.value(), y.value);

  const YNormReport y_short = y_norm(f, g, uniform_times(0.1, 10), kQuad);
  EXPECT_FALSE(y_short.saturated);
  EXPECT_NEAR(y_short.argmax_time, 0.1, 1e-15);
}

TEST(Force, ScalingIsLinear) {
  const Grid g = make_grid(16, 2.0 * std::numbers::pi);
  ForceSpec f = shear(1.0);
  const auto times = uniform_times(1.0, 5);
  const double y1 = y_norm(f, g, times, kQuad).value;
  ForceSpec f3 = f.scaled(3.0);
  EXPECT_FALSE(f3.cached_y_norm.has_value());
  EXPECT_NEAR(y_norm(f3, g, times, kQuad).value, 3.0 * y1, 1e-12 * y1);
}

TEST(Force, DiracSurrogateHasUnitMassProfile) {
  const Grid g = make_grid(32, 2.0 * std::numbers::pi);
  ForceSpec f;
  f.kind = ForceKind::scaled_dirac_surrogate;
  f.amplitude = 1.0;
  f.width = 0.5;
  f.direction = {0.0, 0.0, 1.0};
  const PhysicalField p = f.evaluate(g, 0.0).to_physical();
  // Mean is removed; the peak of a unit-mass Gaussian is (2πσ²)^{-3/2} minus the mean 1/L³.
  double peak = 0.0;
  for (double v : p.component(2)) peak = std::max(peak, v);
  const double want = std::pow(2.0 * std::numbers::pi * 0.25, -1.5) - 1.0 / g.volume();
  EXPECT_NEAR(peak, want, 1e-3 * want);
  EXPECT_THROW(f.evaluate(g, -1.0), std::invalid_argument);
}
