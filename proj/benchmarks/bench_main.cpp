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

#include <benchmark/benchmark.h>

#include <numbers>

#include "mildns/expansion.hpp"
#include "mildns/fft.hpp"
#include "mildns/fields.hpp"
#include "mildns/norms.hpp"
#include "mildns/semigroup.hpp"
#include "mildns/spectral_ops.hpp"

using namespace mildns;

namespace {

SpectralField field(int n, std::uint64_t seed) {
  return random_banded_field(make_grid(n, 2.0 * std::numbers::pi), seed, 1.0, n / 4.0, -1.0);
}

void BM_NonlinearTerm(benchmark::State& state) {
  configure_fft_threads();
  const int n = static_cast<int>(state.range(0));
  const SpectralField u = field(n, 1), v = field(n, 2);
  for (auto _ : state) benchmark::DoNotOptimize(nonlinear_term(u, v));
  state.SetComplexityN(n);
}
BENCHMARK(BM_NonlinearTerm)->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_BilinearB(benchmark::State& state) {
  configure_fft_threads();
  const int n = static_cast<int>(state.range(0));
  const auto times = geometric_times(0.01, 0.5, 8);
  const Trajectory a = heat_flow_trajectory(field(n, 3), times);
  const Trajectory b = heat_flow_trajectory(field(n, 4), times);
  const QuadratureConfig q{2, QuadratureScheme::integrating_factor_trapezoid};
  for (auto _ : state) benchmark::DoNotOptimize(bilinear_B(a, b, q));
}
BENCHMARK(BM_BilinearB)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_BesovNorm(benchmark::State& state) {
  configure_fft_threads();
  const int n = static_cast<int>(state.range(0));
  const SpectralField u = field(n, 5);
  const BesovIndex idx = BesovIndex::critical(4.0, 4.0);
  for (auto _ : state) benchmark::DoNotOptimize(besov_norm(u, idx));
}
BENCHMARK(BM_BesovNorm)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_WeakL3(benchmark::State& state) {
  const SpectralField u = field(static_cast<int>(state.range(0)), 6);
  for (auto _ : state) benchmark::DoNotOptimize(weak_l3_norm(u));
}
BENCHMARK(BM_WeakL3)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_Expand(benchmark::State& state) {
  const int N = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(expand(N));
}
BENCHMARK(BM_Expand)->DenseRange(2, 5)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
