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

#ifndef BEVHD__HDMAP_OVERLAY_HPP_
#define BEVHD__HDMAP_OVERLAY_HPP_

#include <array>
#include <span>
#include <vector>

#include "bevhd/bev_grid.hpp"
#include "bevhd/feature_viz.hpp"
#include "bevhd/scene.hpp"

namespace bevhd
{

struct RenderStyle
{
  // indexed by PolylineKind
  std::array<Rgb, 4> kind_colors{
    Rgb{255, 255, 255},  // centerline
    Rgb{255, 255, 0},    // lane_divider
    Rgb{255, 0, 0},      // road_boundary
    Rgb{0, 128, 255},    // crosswalk
  };
  int thickness{1};
  Rgb predicted{0, 200, 0};
  Rgb ground_truth{255, 140, 0};
  Rgb agent_box{255, 0, 255};

  Rgb color_of(PolylineKind kind) const { return kind_colors[static_cast<std::size_t>(kind)]; }
  /// Throws std::invalid_argument if thickness < 1.
  void validate() const;
};

/// Map polylines in the ego frame, clipped to [-extent, extent]^2. A polyline
/// that leaves and re-enters the square is split into separate pieces.
std::vector<Polyline> crop_map(const HdMap & map, const Pose2 & ego, const GridSpec & spec);

/// Cells visited by one Bresenham segment between clamped endpoint cells, before dilation.
std::vector<Cell> bresenham_cells(Cell from, Cell to);

/// Draws an ego-frame polyline: each segment is clipped, binned and Bresenham-rasterized.
void draw_polyline(
  RgbImage & img, std::span<const Vec2> points, const GridSpec & spec, Rgb color, int thickness);

RgbImage render_polylines(
  RgbImage img, std::span<const Polyline> polylines, const GridSpec & spec,
  const RenderStyle & style);

/// Crop the map around `ego` and render it over `bev`.
RgbImage compose_bev_hd(
  const RgbImage & bev, const HdMap & map, const Pose2 & ego, const GridSpec & spec,
  const RenderStyle & style);

RgbImage render_agent_boxes(
  RgbImage img, const Pose2 & ego, std::span<const AgentState> agents, const GridSpec & spec,
  const RenderStyle & style);

/// Ground truth first, prediction second; both start at the ego origin.
RgbImage render_trajectories(
  RgbImage img, const Trajectory & predicted, const Trajectory & gt, const GridSpec & spec,
  const RenderStyle & style);

}  // namespace bevhd

#endif  // BEVHD__HDMAP_OVERLAY_HPP_
