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

#include "mildns/spectral_ops.hpp"

#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <utility>

#include "mildns/fft.hpp"

namespace mildns {

SpectralField leray_project(const SpectralField& u) {
  SpectralField out = u;
  const Grid& g = u.grid();
  const std::size_t stride = g.spectral_size();
  auto d = out.data();
  for_each_mode(g, [&](std::size_t idx, const ModeIndex& m, int, int, int) {
    if (m == ModeIndex{}) return;
    const Vec3 k = g.wavevector(m);
    const double k2 = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
    const Complex dot =
        k[0] * d[idx] + k[1] * d[stride + idx] + k[2] * d[2 * stride + idx];
    const Complex f = dot / k2;
    d[idx] -= k[0] * f;
    d[stride + idx] -= k[1] * f;
    d[2 * stride + idx] -= k[2] * f;
  });
  out.set_divergence_free(true);
  return out;
}

SpectralField nonlinear_term(const SpectralField& u, const SpectralField& v) {
  if (!(u.grid() == v.grid())) {
    throw std::invalid_argument("nonlinear_term: grid mismatch");
  }
  const Grid& g = u.grid();
  SpectralField out(g);
  if (u.is_zero() || v.is_zero()) {
    out.set_divergence_free(true);
    return out;
  }

  SpectralField ut = u;
  ut.dealias();
  const PhysicalField up = ut.to_physical();
  PhysicalField vp_storage(g);
  const PhysicalField* vp = &up;
  if (&u != &v) {
    SpectralField vt = v;
    vt.dealias();
    vp_storage = vt.to_physical();
    vp = &vp_storage;
  }

  const FftEngine& fft = fft_engine(g.n());
  const std::size_t np = g.physical_size();
  const std::size_t ns = g.spectral_size();
  std::vector<double> prod(np);
  std::vector<Complex> sh(ns);
  auto od = out.data();
  const Complex I(0.0, 1.0);

  static constexpr std::pair<int, int> kPairs[] = {{0, 0}, {0, 1}, {0, 2},
                                                   {1, 1}, {1, 2}, {2, 2}};
  for (const auto& [a, b] : kPairs) {
    const auto ua = up.component(a);
    const auto ub = up.component(b);
    const auto va = vp->component(a);
    const auto vb = vp->component(b);
    for (std::size_t x = 0; x < np; ++x) {
      prod[x] = 0.5 * (ua[x] * vb[x] + va[x] * ub[x]);
    }
    fft.forward(prod, sh);
    // (∇·S)_a += ∂_b S_ab, and by symmetry (∇·S)_b += ∂_a S_ab.
    for_each_mode(g, [&](std::size_t idx, const ModeIndex& m, int, int, int) {
      const Vec3 k = g.wavevector(m);
      od[a * ns + idx] += I * k[b] * sh[idx];
      if (a != b) od[b * ns + idx] += I * k[a] * sh[idx];
    });
  }
  out.dealias();
  out.symmetrize();
  return leray_project(out);
}

std::array<PhysicalField, 3> velocity_gradient(const SpectralField& u) {
  const Grid& g = u.grid();
  const FftEngine& fft = fft_engine(g.n());
  const std::size_t ns = g.spectral_size();
  std::array<PhysicalField, 3> grad{PhysicalField(g), PhysicalField(g),
                                    PhysicalField(g)};
  std::vector<Complex> tmp(ns);
  const Complex I(0.0, 1.0);
  for (int i = 0; i < 3; ++i) {
    const auto ui = u.component(i);
    for (int j = 0; j < 3; ++j) {
      for_each_mode(g, [&](std::size_t idx, const ModeIndex& m, int a, int b,
                           int c) {
        tmp[idx] = g.is_nyquist(a, b, c) ? Complex{}
                                         : I * g.wavevector(m)[j] * ui[idx];
      });
      fft.inverse(tmp, grad[i].component(j));
    }
  }
  return grad;
}

RescaleResult rescale_field(const SpectralField& u, int m, RescaleMode mode) {
  const Grid& g = u.grid();
  const double lambda = std::ldexp(1.0, m);
  if (mode == RescaleMode::matched_box) {
    SpectralField out(Grid(g.n(), g.box_length() / lambda));
    auto od = out.data();
    const auto ud = u.data();
    for (std::size_t i = 0; i < ud.size(); ++i) od[i] = lambda * ud[i];
    out.set_divergence_free(u.divergence_free());
    return {std::move(out), 0.0};
  }

  SpectralField out(g);
  const std::size_t ns = g.spectral_size();
  const int half = g.n() / 2;
  const auto ud = u.data();
  auto od = out.data();
  double total = 0.0;
  double dropped = 0.0;
  for_each_mode(g, [&](std::size_t idx, const ModeIndex& k, int, int, int l) {
    const double e = half_spectrum_weight(g, l) *
                     (std::norm(ud[idx]) + std::norm(ud[ns + idx]) +
                      std::norm(ud[2 * ns + idx]));
    if (e == 0.0) return;
    total += e;
    ModeIndex target;
    bool ok = true;
    if (m >= 0) {
      const int f = 1 << m;
      target = {k.x * f, k.y * f, k.z * f};
    } else {
      const int d = 1 << (-m);
      ok = k.x % d == 0 && k.y % d == 0 && k.z % d == 0;
      target = {k.x / d, k.y / d, k.z / d};
    }
    ok = ok && std::abs(target.x) < half && std::abs(target.y) < half &&
         target.z < half;
    if (!ok) {
      dropped += e;
      return;
    }
    const std::size_t t = g.flat_index(g.axis_position(target.x),
                                       g.axis_position(target.y), target.z);
    for (int c = 0; c < 3; ++c) od[c * ns + t] = lambda * ud[c * ns + idx];
  });
  out.set_divergence_free(u.divergence_free());
  return {std::move(out), total > 0.0 ? dropped / total : 0.0};
}

}  // namespace mildns
