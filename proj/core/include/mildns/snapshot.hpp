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

#include <filesystem>
#include <iosfwd>

#include "mildns/trajectory.hpp"

namespace mildns {

/// Binary field snapshot, all integers and floats little-endian:
///
///   offset  size  content
///        0     4  magic "MNSF"
///        4     4  uint32 version (1)
///        8     4  uint32 n (points per axis)
///       12     4  uint32 scalar bytes: 4 (complex64) or 8 (complex128)
///       16     8  float64 box_length
///       24     8  float64 time
///       32     4  uint32 flags (bit 0: divergence-free)
///       36     4  uint32 reserved (0)
///       40     …  3 components, each n·n·(n/2+1) complex (re, im) pairs in
///                 half-spectrum order (i·n + j)·(n/2+1) + l, component-major
///
/// A trajectory file is "MNST", uint32 version (1), uint32 count, followed by
/// `count` snapshots.
enum class SnapshotPrecision { complex64 = 4, complex128 = 8 };

void write_snapshot(std::ostream& out, const SpectralField& u, double time,
                    SnapshotPrecision precision = SnapshotPrecision::complex128);

struct Snapshot {
  SpectralField field;
  double time;
};
Snapshot read_snapshot(std::istream& in);

void write_trajectory(const std::filesystem::path& path, const Trajectory& traj,
                      SnapshotPrecision precision = SnapshotPrecision::complex128);
Trajectory read_trajectory(const std::filesystem::path& path);

}  // namespace mildns
