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
#include <sstream>

#include "mildns/dyadic.hpp"
#include "mildns/expansion.hpp"
#include "mildns/experiments/artifacts.hpp"
#include "mildns/norms.hpp"
#include "mildns/semigroup.hpp"
#include "mildns/spectral_ops.hpp"
#include "test_support.hpp"

using namespace mildns;
using mildns::testing::Gen;
using mildns::testing::max_mode;
using mildns::testing::max_mode_diff;

namespace {

constexpr int kTrials = 12;

TermPtr random_tree(Gen& gen, int depth) {
  if (depth == 0 || gen.integer(0, 3) == 0) {
    return TermNode::leaf(static_cast<Leaf>(gen.integer(0, 3)));
  }
  return TermNode::B(random_tree(gen, depth - 1), random_tree(gen, depth - 1));
}

}  // namespace

TEST(Property, LerayIsIdempotentAndKillsDivergence) {
  Gen gen(101);
  for (int t = 0; t < kTrials; ++t) {
    const Grid g = gen.grid();
    const SpectralField u = gen.rough_field(g);
    const SpectralField p = leray_project(u);
    EXPECT_LT(max_mode_diff(leray_project(p), p), 1e-15 * std::max(1.0, max_mode(u)));
    EXPECT_LT(p.divergence_defect(), 1e-14);
    // Projection does not increase energy.
    EXPECT_LE(p.l2_norm_sq(), u.l2_norm_sq() * (1.0 + 1e-14));
  }
}

TEST(Property, NonlinearTermIsBilinear) {
  Gen gen(102);
  for (int t = 0; t < kTrials / 2; ++t) {
    const Grid g = gen.grid();
    const SpectralField u = gen.field(g), v = gen.field(g), w = gen.field(g);
    const double a = gen.uniform(-2.0, 2.0), b = gen.uniform(-2.0, 2.0);
    const SpectralField lhs = nonlinear_term(a * u + b * v, w);
    const SpectralField rhs = a * nonlinear_term(u, w) + b * nonlinear_term(v, w);
    EXPECT_LT(max_mode_diff(lhs, rhs), 1e-12 * std::max(1e-300, max_mode(rhs)));
  }
}

TEST(Property, BesovNormIsHomogeneousAndSubadditive) {
  Gen gen(103);
  for (int t = 0; t < kTrials; ++t) {
    const Grid g = gen.grid();
    const double p = gen.pick(std::vector<double>{3.5, 4.0, 6.0});
    const BesovIndex idx = BesovIndex::critical(p, gen.pick(std::vector<double>{1.0, 2.0, p, kInf}));
    const SpectralField u = gen.field(g), v = gen.field(g);
    const double c = gen.uniform(-3.0, 3.0);
    const double nu = besov_norm(u, idx);
    EXPECT_NEAR(besov_norm(c * u, idx), std::abs(c) * nu, 1e-12 * nu);
    EXPECT_LE(besov_norm(u + v, idx), (nu + besov_norm(v, idx)) * (1.0 + 1e-12));
  }
}

TEST(Property, LorentzNormIgnoresOrder) {
  Gen gen(104);
  for (int t = 0; t < kTrials; ++t) {
    std::vector<double> f(static_cast<std::size_t>(gen.integer(5, 200)));
    for (double& x : f) x = std::abs(gen.uniform(-3.0, 3.0));
    if (gen.integer(0, 1)) f[0] = f[1];  // ties
    const double p = gen.uniform(1.2, 6.0);
    const double q = gen.pick(std::vector<double>{1.0, 2.0, 5.0, kInf});
    const double dv = gen.uniform(0.01, 1.0);
    const double before = lorentz_norm(f, dv, p, q);
    std::shuffle(f.begin(), f.end(), gen.engine());
    EXPECT_NEAR(lorentz_norm(f, dv, p, q), before, 1e-12 * before);
    // Doubling every value doubles the norm.
    for (double& x : f) x *= 2.0;
    EXPECT_NEAR(lorentz_norm(f, dv, p, q), 2.0 * before, 1e-12 * before);
  }
}

TEST(Property, HeatSemigroupComposes) {
  Gen gen(105);
  for (int t = 0; t < kTrials; ++t) {
    const Grid g = gen.grid();
    const SpectralField u = gen.field(g);
    const double s = gen.uniform(0.0, 0.5), r = gen.uniform(0.0, 0.5);
    EXPECT_LT(max_mode_diff(heat_flow(heat_flow(u, s), r), heat_flow(u, s + r)),
              1e-14 * max_mode(u));
    // L² norm is nonincreasing along the flow.
    EXPECT_LE(heat_flow(u, s + r).l2_norm(), heat_flow(u, s).l2_norm() * (1.0 + 1e-15));
  }
}

TEST(Property, DyadicBlocksPartitionRandomFields) {
  Gen gen(106);
  for (int t = 0; t < kTrials; ++t) {
    const Grid g = gen.grid();
    const SpectralField u = gen.rough_field(g);
    const auto [jlo, jhi] = band_range(g);
    SpectralField sum(g);
    for (int j = jlo; j <= jhi; ++j) sum += dyadic_block(u, j);
    SpectralField u0 = u;
    u0.zero_mean();
    EXPECT_LT(max_mode_diff(sum, u0), 1e-14 * max_mode(u));
  }
}

TEST(Property, TermTreesRoundTripThroughText) {
  Gen gen(107);
  for (int t = 0; t < 200; ++t) {
    const TermPtr tr = random_tree(gen, gen.integer(0, 5));
    const TermPtr back = parse_term(tr->key());
    EXPECT_EQ(back->key(), tr->key());
    EXPECT_EQ(back->depth(), tr->depth());
    if (!tr->is_leaf()) {
      EXPECT_EQ(TermNode::B(tr->right(), tr->left())->key(), tr->key());
    }
  }
}

TEST(Property, CsvNumbersRoundTrip) {
  Gen gen(108);
  mildns::experiments::CsvTable table({"substeps", "gap"});
  std::vector<double> values;
  for (int t = 0; t < 100; ++t) {
    const double v = std::ldexp(gen.uniform(0.5, 1.0), gen.integer(-1000, 1000));
    values.push_back(v);
    table.add_row({std::int64_t{t}, v});
  }
  const std::string text = table.str();
  EXPECT_EQ(mildns::experiments::validate_csv("richardson.csv", text), "");
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);
  for (double v : values) {
    std::getline(in, line);
    EXPECT_EQ(std::stod(line.substr(line.find(',') + 1)), v);
  }
}
