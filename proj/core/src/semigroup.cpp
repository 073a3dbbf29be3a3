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

#include "mildns/semigroup.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>

#include "mildns/spectral_ops.hpp"

namespace mildns {
namespace {

// |m|² of every half-spectrum slot, shared per n.
const std::vector<int>& mode_norm_sq(const Grid& g) {
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<std::vector<int>>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[g.n()];
  if (!slot) {
    slot = std::make_unique<std::vector<int>>(g.spectral_size());
    for_each_mode(g, [&](std::size_t idx, const ModeIndex& m, int, int, int) {
      (*slot)[idx] = m.norm_sq();
    });
  }
  return *slot;
}

int max_norm_sq(const Grid& g) { return 3 * (g.n() / 2) * (g.n() / 2); }

// Weight tables for one piece length, indexed by |m|².
struct WeightTable {
  std::vector<double> decay, left, right, midpoint;

  WeightTable(const Grid& g, double h) {
    const int top = max_norm_sq(g);
    decay.resize(top + 1);
    left.resize(top + 1);
    right.resize(top + 1);
    midpoint.resize(top + 1);
    const double ku2 = g.k_unit() * g.k_unit();
    for (int s = 0; s <= top; ++s) {
      const EtdWeights w = etd_weights(ku2 * s, h);
      decay[s] = w.decay;
      left[s] = w.left;
      right[s] = w.right;
      midpoint[s] = w.midpoint;
    }
  }
};

// acc ← decay·acc + sign·(wa·fa + wb·fb); fb may be null.
void etd_update(SpectralField& acc, const std::vector<int>& msq,
                const std::vector<double>& decay, const std::vector<double>& wa,
                const SpectralField& fa, const std::vector<double>* wb,
                const SpectralField* fb, double sign) {
  const std::size_t ns = acc.grid().spectral_size();
  auto d = acc.data();
  const auto a = fa.data();
  for (int c = 0; c < 3; ++c) {
    const std::size_t off = c * ns;
    if (fb) {
      const auto b = fb->data();
      for (std::size_t i = 0; i < ns; ++i) {
        const int s = msq[i];
        d[off + i] = decay[s] * d[off + i] +
                     sign * (wa[s] * a[off + i] + (*wb)[s] * b[off + i]);
      }
    } else {
      for (std::size_t i = 0; i < ns; ++i) {
        const int s = msq[i];
        d[off + i] = decay[s] * d[off + i] + sign * wa[s] * a[off + i];
      }
    }
  }
}

// Integrates sign·∫ e^{(t-s)Δ} src(s) ds along `times`, splitting each
// interval into q.substeps pieces and reporting the value at every time.
template <class Source, class Emit>
void integrate(const Grid& g, std::span<const double> times,
               const QuadratureConfig& q, double sign, Source&& src,
               Emit&& emit) {
  validate(q);
  const auto& msq = mode_norm_sq(g);
  SpectralField acc(g);
  acc.set_divergence_free(true);
  emit(std::size_t{0}, acc);
  const bool trapezoid =
      q.scheme == QuadratureScheme::integrating_factor_trapezoid;
  SpectralField prev = trapezoid ? src(times[0]) : SpectralField(g);
  bool all_divfree = !trapezoid || prev.divergence_free();
  for (std::size_t i = 0; i + 1 < times.size(); ++i) {
    const double t0 = times[i];
    const double t1 = times[i + 1];
    const double h = (t1 - t0) / q.substeps;
    const WeightTable w(g, h);
    for (int k = 1; k <= q.substeps; ++k) {
      if (trapezoid) {
        const double tau = k == q.substeps ? t1 : t0 + k * h;
        SpectralField next = src(tau);
        all_divfree = all_divfree && next.divergence_free();
        etd_update(acc, msq, w.decay, w.left, prev, &w.right, &next, sign);
        prev = std::move(next);
      } else {
        const SpectralField mid = src(t0 + (k - 0.5) * h);
        all_divfree = all_divfree && mid.divergence_free();
        etd_update(acc, msq, w.decay, w.midpoint, mid, nullptr, nullptr, sign);
      }
    }
    acc.set_divergence_free(all_divfree);
    emit(i + 1, acc);
  }
}

}  // namespace

void validate(const QuadratureConfig& q) {
  if (q.substeps < 1) {
    throw std::invalid_argument("quadrature: substeps must be >= 1");
  }
}

EtdWeights etd_weights(double kappa, double h) {
  const double z = kappa * h;
  const double e = std::exp(-z);
  double phi1;
  double phi2;
  if (z < 0.5) {
    // φ1 = Σ (-z)^n/(n+1)!,  φ2 = Σ (-z)^n (n+1)/(n+2)!
    phi1 = 0.0;
    phi2 = 0.0;
    double term = 1.0;  // (-z)^n / n!
    for (int n = 0; n < 24; ++n) {
      phi1 += term / (n + 1);
      phi2 += term / (n + 2);
      term *= -z / (n + 1);
    }
  } else {
    phi1 = (1.0 - e) / z;
    phi2 = (1.0 - e * (1.0 + z)) / (z * z);
  }
  return {e, h * phi2, h * (phi1 - phi2), h * phi1};
}

SpectralField heat_flow(const SpectralField& u, double t) {
  if (!(t >= 0.0)) throw std::invalid_argument("heat_flow: t must be >= 0");
  SpectralField out = u;
  if (t == 0.0) return out;
  const Grid& g = u.grid();
  const auto& msq = mode_norm_sq(g);
  const double ku2 = g.k_unit() * g.k_unit();
  std::vector<double> factor(max_norm_sq(g) + 1);
  for (std::size_t s = 0; s < factor.size(); ++s) {
    factor[s] = std::exp(-ku2 * static_cast<double>(s) * t);
  }
  const std::size_t ns = g.spectral_size();
  auto d = out.data();
  for (int c = 0; c < 3; ++c) {
    for (std::size_t i = 0; i < ns; ++i) d[c * ns + i] *= factor[msq[i]];
  }
  return out;
}

Trajectory heat_flow_trajectory(const SpectralField& u,
                                std::vector<double> times) {
  validate_times(times);
  std::vector<SpectralField> states;
  states.reserve(times.size());
  for (double t : times) states.push_back(heat_flow(u, t));
  return Trajectory(std::move(times), std::move(states));
}

SpectralField duhamel(const SourceFn& f, double t, const QuadratureConfig& q) {
  if (!(t >= 0.0)) throw std::invalid_argument("duhamel: t must be >= 0");
  const SpectralField f0 = f(0.0);
  if (t == 0.0) return SpectralField(f0.grid());
  const double times[] = {0.0, t};
  SpectralField result(f0.grid());
  integrate(f0.grid(), times, q, 1.0, f,
            [&](std::size_t i, const SpectralField& v) {
              if (i == 1) result = v;
            });
  return result;
}

SpectralField duhamel(const Trajectory& source, double t,
                      const QuadratureConfig& q) {
  if (!(t >= 0.0 && t <= source.end_time() * (1.0 + 1e-12))) {
    throw std::out_of_range("duhamel: t outside the source time span");
  }
  if (t == 0.0) return SpectralField(source.grid());
  std::vector<double> nodes;
  for (double s : source.times()) {
    if (s < t * (1.0 - 1e-12)) nodes.push_back(s);
  }
  nodes.push_back(t);
  SpectralField result(source.grid());
  integrate(source.grid(), nodes, q, 1.0,
            [&](double tau) { return source.at(std::min(tau, source.end_time())); },
            [&](std::size_t i, const SpectralField& v) {
              if (i + 1 == nodes.size()) result = v;
            });
  return result;
}

namespace {

template <class Source>
Trajectory collect(const Grid& g, std::span<const double> times,
                   const QuadratureConfig& q, double sign, Source&& src) {
  validate_times(times);
  std::vector<SpectralField> states;
  states.reserve(times.size());
  integrate(g, times, q, sign, std::forward<Source>(src),
            [&](std::size_t, const SpectralField& v) { states.push_back(v); });
  return Trajectory(std::vector<double>(times.begin(), times.end()),
                    std::move(states));
}

}  // namespace

Trajectory duhamel_trajectory(const Trajectory& source,
                              const QuadratureConfig& q) {
  if (source.is_zero()) return Trajectory::zeros(source.grid(), source.times());
  return collect(source.grid(), source.times(), q, 1.0,
                 [&](double tau) { return source.at(tau); });
}

Trajectory duhamel_trajectory(const SourceFn& f, std::span<const double> times,
                              const QuadratureConfig& q) {
  validate_times(times);
  const SpectralField f0 = f(0.0);
  return collect(f0.grid(), times, q, 1.0, f);
}

Trajectory bilinear_B(const Trajectory& u, const Trajectory& v,
                      const QuadratureConfig& q) {
  if (!(u.grid() == v.grid())) {
    throw std::invalid_argument("bilinear_B: grid mismatch");
  }
  if (!u.same_time_grid(v)) {
    throw std::invalid_argument("bilinear_B: time grids differ");
  }
  if (u.is_zero() || v.is_zero()) {
    Trajectory z = Trajectory::zeros(u.grid(), u.times());
    for (std::size_t i = 0; i < z.size(); ++i) {
      z.state(i).set_divergence_free(true);
    }
    return z;
  }
  const bool same = &u == &v;
  return collect(u.grid(), u.times(), q, -1.0, [&](double tau) {
    const SpectralField ut = u.at(tau);
    if (same) return nonlinear_term(ut, ut);
    return nonlinear_term(ut, v.at(tau));
  });
}

}  // namespace mildns
