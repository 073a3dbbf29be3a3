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

#include <complex>
#include <span>

namespace mildns {

/// Real-to-complex 3-D transform pair for an n^3 grid.
///
/// forward() divides by n^3, so the output holds Fourier-series coefficients
/// û(k) with u(x) = Σ û(k) e^{ik·x}; inverse() is the plain synthesis sum.
/// Plans are created once and shared; execution is safe from any thread.
class FftEngine {
 public:
  explicit FftEngine(int n);
  ~FftEngine();
  FftEngine(const FftEngine&) = delete;
  FftEngine& operator=(const FftEngine&) = delete;

  int n() const { return n_; }

  void forward(std::span<const double> in,
               std::span<std::complex<double>> out) const;
  /// `in` is left untouched; a thread-local scratch copy absorbs the c2r
  /// clobbering.
  void inverse(std::span<const std::complex<double>> in,
               std::span<double> out) const;

 private:
  int n_;
  void* forward_plan_;
  void* inverse_plan_;
};

/// Shared engine for grids with n points per axis.
const FftEngine& fft_engine(int n);

/// Thread count used for plans created after this call. Reads MILDNS_THREADS
/// when called with 0.
void configure_fft_threads(int threads = 0);
int fft_threads();

}  // namespace mildns
