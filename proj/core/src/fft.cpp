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

#include "mildns/fft.hpp"

#include <fftw3.h>

#include <cstdlib>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <vector>

namespace mildns {
namespace {

// The FFTW planner is not re-entrant; every plan creation goes through here.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

int g_threads = 1;
bool g_threads_initialised = false;

void init_threads_locked(int threads) {
#ifdef MILDNS_HAVE_FFTW_THREADS
  if (!g_threads_initialised) {
    fftw_init_threads();
    g_threads_initialised = true;
  }
  fftw_plan_with_nthreads(threads);
#endif
  g_threads = threads;
}

int threads_from_env() {
  if (const char* env = std::getenv("MILDNS_THREADS")) {
    const int t = std::atoi(env);
    if (t > 0) return t;
  }
  return 1;
}

}  // namespace

FftEngine::FftEngine(int n) : n_(n) {
  if (n <= 0) throw std::invalid_argument("fft: n must be positive");
  const std::size_t real_size = static_cast<std::size_t>(n) * n * n;
  const std::size_t cplx_size = static_cast<std::size_t>(n) * n * (n / 2 + 1);
  std::vector<double> r(real_size);
  std::vector<std::complex<double>> c(cplx_size);
  auto* cptr = reinterpret_cast<fftw_complex*>(c.data());
  // ESTIMATE never touches the arrays during planning and gives plans that
  // are reproducible from run to run.
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  std::lock_guard lock(planner_mutex());
  if (!g_threads_initialised) init_threads_locked(threads_from_env());
  forward_plan_ = fftw_plan_dft_r2c_3d(n, n, n, r.data(), cptr, flags);
  inverse_plan_ = fftw_plan_dft_c2r_3d(n, n, n, cptr, r.data(), flags);
  if (!forward_plan_ || !inverse_plan_) {
    throw std::runtime_error("fft: plan creation failed for n=" +
                             std::to_string(n));
  }
}

FftEngine::~FftEngine() {
  std::lock_guard lock(planner_mutex());
  fftw_destroy_plan(static_cast<fftw_plan>(forward_plan_));
  fftw_destroy_plan(static_cast<fftw_plan>(inverse_plan_));
}

void FftEngine::forward(std::span<const double> in,
                        std::span<std::complex<double>> out) const {
  const std::size_t real_size = static_cast<std::size_t>(n_) * n_ * n_;
  if (in.size() != real_size ||
      out.size() != static_cast<std::size_t>(n_) * n_ * (n_ / 2 + 1)) {
    throw std::invalid_argument("fft: forward size mismatch");
  }
  fftw_execute_dft_r2c(static_cast<fftw_plan>(forward_plan_),
                       const_cast<double*>(in.data()),
                       reinterpret_cast<fftw_complex*>(out.data()));
  const double scale = 1.0 / static_cast<double>(real_size);
  for (auto& v : out) v *= scale;
}

void FftEngine::inverse(std::span<const std::complex<double>> in,
                        std::span<double> out) const {
  if (out.size() != static_cast<std::size_t>(n_) * n_ * n_ ||
      in.size() != static_cast<std::size_t>(n_) * n_ * (n_ / 2 + 1)) {
    throw std::invalid_argument("fft: inverse size mismatch");
  }
  thread_local std::vector<std::complex<double>> scratch;
  scratch.assign(in.begin(), in.end());
  fftw_execute_dft_c2r(static_cast<fftw_plan>(inverse_plan_),
                       reinterpret_cast<fftw_complex*>(scratch.data()),
                       out.data());
}

const FftEngine& fft_engine(int n) {
  static std::mutex cache_mutex;
  static std::map<int, std::unique_ptr<FftEngine>> cache;
  std::lock_guard lock(cache_mutex);
  auto it = cache.find(n);
  if (it == cache.end()) {
    it = cache.emplace(n, std::make_unique<FftEngine>(n)).first;
  }
  return *it->second;
}

void configure_fft_threads(int threads) {
  std::lock_guard lock(planner_mutex());
  init_threads_locked(threads > 0 ? threads : threads_from_env());
}

int fft_threads() { return g_threads; }

}  // namespace mildns
