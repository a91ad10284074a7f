// Copyright 2026 The bevhd Authors
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

#ifndef BEVHD__BOX_MATH_HPP_
#define BEVHD__BOX_MATH_HPP_

#include <algorithm>
#include <cmath>

#include "bevhd/bev_grid.hpp"

namespace bevhd::detail
{

/// OrientedBox with its rotation precomputed for repeated containment tests.
struct PreparedBox
{
  Vec2 center;
  double c{1.0};
  double s{0.0};
  double half_length{0.0};
  double half_width{0.0};

  explicit PreparedBox(const OrientedBox & box)
  : center(box.center), c(std::cos(box.yaw)), s(std::sin(box.yaw)),
    half_length(0.5 * box.length), half_width(0.5 * box.width)
  {
  }

  bool contains(Vec2 p) const
  {
    const double dx = p.x - center.x;
    const double dy = p.y - center.y;
    const double lx = snap_nm(c * dx + s * dy);
    const double ly = snap_nm(-s * dx + c * dy);
    return std::abs(lx) <= half_length && std::abs(ly) <= half_width;
  }
};

/// Inclusive cell index range, possibly empty (lo > hi).
struct CellRange
{
  int row_lo{0};
  int row_hi{-1};
  int col_lo{0};
  int col_hi{-1};
};

/// Conservative cell range covering the ego-frame box [lo, hi], padded by one cell.
inline CellRange cell_range(const GridSpec & spec, Vec2 lo, Vec2 hi)
{
  const double e = spec.extent;
  const double col_scale = spec.width_cells / (2.0 * e);
  const double row_scale = spec.height_cells / (2.0 * e);
  auto clamp_idx = [](double v, int n) {
      if (v < -1.0) {
        return -1;
      }
      if (v > n) {
        return n;
      }
      return static_cast<int>(std::floor(v));
    };
  CellRange r;
  r.col_lo = std::max(0, clamp_idx((lo.x + e) * col_scale, spec.width_cells) - 1);
  r.col_hi = std::min(spec.width_cells - 1, clamp_idx((hi.x + e) * col_scale, spec.width_cells) + 1);
  r.row_lo = std::max(0, clamp_idx((e - hi.y) * row_scale, spec.height_cells) - 1);
  r.row_hi = std::min(spec.height_cells - 1, clamp_idx((e - lo.y) * row_scale, spec.height_cells) + 1);
  return r;
}

}  // namespace bevhd::detail

#endif  // BEVHD__BOX_MATH_HPP_
