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

#include "mildns/grid.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace mildns {

Grid::Grid(int n_per_axis, double box_length)
    : n_(n_per_axis), length_(box_length) {
  if (n_per_axis < 8 || n_per_axis % 2 != 0) {
    throw std::invalid_argument("grid: n_per_axis must be even and >= 8, got " +
                                std::to_string(n_per_axis));
  }
  if (!(box_length > 0.0) || !std::isfinite(box_length)) {
    throw std::invalid_argument("grid: box_length must be positive and finite");
  }
}

Grid make_grid(int n_per_axis, double box_length) {
  return Grid(n_per_axis, box_length);
}

}  // namespace mildns
