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

#include "mildns/snapshot.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace mildns {
namespace {

constexpr char kFieldMagic[4] = {'M', 'N', 'S', 'F'};
constexpr char kTrajMagic[4] = {'M', 'N', 'S', 'T'};
constexpr std::uint32_t kVersion = 1;

template <class T>
T to_little(T v) {
  if constexpr (std::endian::native == std::endian::big) {
    unsigned char b[sizeof(T)];
    std::memcpy(b, &v, sizeof(T));
    for (std::size_t i = 0; i < sizeof(T) / 2; ++i) {
      std::swap(b[i], b[sizeof(T) - 1 - i]);
    }
    std::memcpy(&v, b, sizeof(T));
  }
  return v;
}

template <class T>
void put(std::ostream& out, T v) {
  v = to_little(v);
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get(std::istream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!in) throw std::runtime_error("snapshot: truncated input");
  return to_little(v);
}

}  // namespace

void write_snapshot(std::ostream& out, const SpectralField& u, double time,
                    SnapshotPrecision precision) {
  const Grid& g = u.grid();
  out.write(kFieldMagic, 4);
  put<std::uint32_t>(out, kVersion);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(g.n()));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(precision));
  put<double>(out, g.box_length());
  put<double>(out, time);
  put<std::uint32_t>(out, u.divergence_free() ? 1u : 0u);
  put<std::uint32_t>(out, 0u);
  for (const Complex& c : u.data()) {
    if (precision == SnapshotPrecision::complex64) {
      put<float>(out, static_cast<float>(c.real()));
      put<float>(out, static_cast<float>(c.imag()));
    } else {
      put<double>(out, c.real());
      put<double>(out, c.imag());
    }
  }
  if (!out) throw std::runtime_error("snapshot: write failed");
}

Snapshot read_snapshot(std::istream& in) {
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kFieldMagic, 4) != 0) {
    throw std::runtime_error("snapshot: bad magic");
  }
  if (get<std::uint32_t>(in) != kVersion) {
    throw std::runtime_error("snapshot: unsupported version");
  }
  const auto n = get<std::uint32_t>(in);
  const auto bytes = get<std::uint32_t>(in);
  if (bytes != 4 && bytes != 8) {
    throw std::runtime_error("snapshot: bad scalar width");
  }
  const double length = get<double>(in);
  const double time = get<double>(in);
  const auto flags = get<std::uint32_t>(in);
  (void)get<std::uint32_t>(in);
  SpectralField u(Grid(static_cast<int>(n), length));
  for (Complex& c : u.data()) {
    if (bytes == 4) {
      const float re = get<float>(in);
      const float im = get<float>(in);
      c = Complex(re, im);
    } else {
      const double re = get<double>(in);
      const double im = get<double>(in);
      c = Complex(re, im);
    }
  }
  u.set_divergence_free((flags & 1u) != 0);
  return {std::move(u), time};
}

void write_trajectory(const std::filesystem::path& path, const Trajectory& traj,
                      SnapshotPrecision precision) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("snapshot: cannot open " + path.string());
  out.write(kTrajMagic, 4);
  put<std::uint32_t>(out, kVersion);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(traj.size()));
  for (std::size_t i = 0; i < traj.size(); ++i) {
    write_snapshot(out, traj.state(i), traj.times()[i], precision);
  }
}

Trajectory read_trajectory(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("snapshot: cannot open " + path.string());
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kTrajMagic, 4) != 0) {
    throw std::runtime_error("snapshot: bad trajectory magic");
  }
  if (get<std::uint32_t>(in) != kVersion) {
    throw std::runtime_error("snapshot: unsupported trajectory version");
  }
  const auto count = get<std::uint32_t>(in);
  std::vector<double> times;
  std::vector<SpectralField> states;
  for (std::uint32_t i = 0; i < count; ++i) {
    Snapshot s = read_snapshot(in);
    times.push_back(s.time);
    states.push_back(std::move(s.field));
  }
  return Trajectory(std::move(times), std::move(states));
}

}  // namespace mildns
