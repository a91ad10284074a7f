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

#include "bevhd/hdmap_overlay.hpp"

#include <cstdlib>
#include <stdexcept>

namespace bevhd
{

void RenderStyle::validate() const
{
  if (thickness < 1) {
    throw std::invalid_argument("render style thickness must be >= 1");
  }
}

std::vector<Polyline> crop_map(const HdMap & map, const Pose2 & ego, const GridSpec & spec)
{
  const Vec2 lo{-spec.extent, -spec.extent};
  const Vec2 hi{spec.extent, spec.extent};
  std::vector<Polyline> out;

  for (const auto & pl : map.polylines) {
    Polyline piece{pl.kind, {}};
    auto flush = [&] {
        if (piece.points.size() >= 2) {
          out.push_back(piece);
        }
        piece.points.clear();
      };

    std::vector<Vec2> local;
    local.reserve(pl.points.size());
    for (const auto & p : pl.points) {
      local.push_back(world_to_ego(ego, p));
    }
    for (std::size_t i = 0; i + 1 < local.size(); ++i) {
      const auto clipped = clip_segment(local[i], local[i + 1], lo, hi);
      if (!clipped) {
        flush();
        continue;
      }
      if (!piece.points.empty() && piece.points.back() == clipped->a) {
        piece.points.push_back(clipped->b);
      } else {
        flush();
        if (clipped->a == clipped->b) {
          continue;
        }
        piece.points = {clipped->a, clipped->b};
      }
    }
    flush();
  }
  return out;
}

std::vector<Cell> bresenham_cells(Cell from, Cell to)
{
  std::vector<Cell> cells;
  int x0 = from.col;
  int y0 = from.row;
  const int dx = std::abs(to.col - x0);
  const int dy = -std::abs(to.row - y0);
  const int sx = x0 < to.col ? 1 : -1;
  const int sy = y0 < to.row ? 1 : -1;
  int err = dx + dy;
  while (true) {
    cells.push_back({y0, x0});
    if (x0 == to.col && y0 == to.row) {
      break;
    }
    const int e2 = 2 * err;
    if (e2 >= dy) {
      err += dy;
      x0 += sx;
    }
    if (e2 <= dx) {
      err += dx;
      y0 += sy;
    }
  }
  return cells;
}

void draw_polyline(
  RgbImage & img, std::span<const Vec2> points, const GridSpec & spec, Rgb color, int thickness)
{
  if (img.height != spec.height_cells || img.width != spec.width_cells) {
    throw std::invalid_argument("image dimensions do not match the grid");
  }
  const Vec2 lo{-spec.extent, -spec.extent};
  const Vec2 hi{spec.extent, spec.extent};
  const int before = (thickness - 1) / 2;
  const int after = thickness / 2;
  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    const auto seg = clip_segment(points[i], points[i + 1], lo, hi);
    if (!seg) {
      continue;
    }
    const Cell a = point_to_cell_clamped(spec, seg->a);
    const Cell b = point_to_cell_clamped(spec, seg->b);
    for (const Cell & c : bresenham_cells(a, b)) {
      for (int dr = -before; dr <= after; ++dr) {
        for (int dc = -before; dc <= after; ++dc) {
          const int r = c.row + dr;
          const int cc = c.col + dc;
          if (r >= 0 && r < img.height && cc >= 0 && cc < img.width) {
            img.set(r, cc, color);
          }
        }
      }
    }
  }
}

RgbImage render_polylines(
  RgbImage img, std::span<const Polyline> polylines, const GridSpec & spec,
  const RenderStyle & style)
{
  style.validate();
  for (const auto & pl : polylines) {
    draw_polyline(img, pl.points, spec, style.color_of(pl.kind), style.thickness);
  }
  return img;
}

RgbImage compose_bev_hd(
  const RgbImage & bev, const HdMap & map, const Pose2 & ego, const GridSpec & spec,
  const RenderStyle & style)
{
  return render_polylines(bev, crop_map(map, ego, spec), spec, style);
}

RgbImage render_agent_boxes(
  RgbImage img, const Pose2 & ego, std::span<const AgentState> agents, const GridSpec & spec,
  const RenderStyle & style)
{
  style.validate();
  for (const auto & a : agents) {
    const auto c = agent_box_in_ego(ego, a).corners();
    const std::array<Vec2, 5> outline{c[0], c[1], c[2], c[3], c[0]};
    draw_polyline(img, outline, spec, style.agent_box, style.thickness);
  }
  return img;
}

RgbImage render_trajectories(
  RgbImage img, const Trajectory & predicted, const Trajectory & gt, const GridSpec & spec,
  const RenderStyle & style)
{
  style.validate();
  auto with_origin = [](const Trajectory & t) {
      std::vector<Vec2> pts{Vec2{0.0, 0.0}};
      pts.insert(pts.end(), t.waypoints.begin(), t.waypoints.end());
      return pts;
    };
  draw_polyline(img, with_origin(gt), spec, style.ground_truth, style.thickness);
  draw_polyline(img, with_origin(predicted), spec, style.predicted, style.thickness);
  return img;
}

}  // namespace bevhd
