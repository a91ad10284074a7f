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

#ifndef BEVHD__GEOMETRY_HPP_
#define BEVHD__GEOMETRY_HPP_

#include <array>
#include <cmath>
#include <numbers>
#include <optional>

namespace bevhd
{

struct Vec2
{
  double x{0.0};
  double y{0.0};

  friend constexpr Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend constexpr Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend constexpr Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
  friend constexpr bool operator==(Vec2 a, Vec2 b) = default;
};

constexpr double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
constexpr double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }

/// Wraps an angle into [-pi, pi).
double normalize_angle(double angle);

/// Planar pose in the world frame; yaw is CCW from world +x.
struct Pose2
{
  double x{0.0};
  double y{0.0};
  double yaw{0.0};

  Vec2 position() const { return {x, y}; }
  friend constexpr bool operator==(const Pose2 &, const Pose2 &) = default;
};

/// Translate by -ego position, then rotate by -ego yaw. Result is x forward, y left.
Vec2 world_to_ego(const Pose2 & ego, Vec2 p);
Vec2 ego_to_world(const Pose2 & ego, Vec2 p);
/// Heading of a world-frame yaw as seen from the ego frame.
double yaw_to_ego(const Pose2 & ego, double yaw);

/// Applies `transform` (as a rigid motion) to a pose expressed in the same frame.
Pose2 compose(const Pose2 & transform, const Pose2 & pose);
Vec2 compose(const Pose2 & transform, Vec2 p);

/// Rounds to a 1e-9 m lattice. Used before binning so sub-nanometre
/// rounding noise cannot move a point across a cell boundary.
double snap_nm(double v);

struct Segment
{
  Vec2 a;
  Vec2 b;
};

/// Liang-Barsky clip of segment a->b to the closed box [lo, hi]^2 (per axis).
std::optional<Segment> clip_segment(Vec2 a, Vec2 b, Vec2 lo, Vec2 hi);

/// Rectangle with `length` along `yaw` and `width` across it.
struct OrientedBox
{
  Vec2 center;
  double yaw{0.0};
  double length{0.0};
  double width{0.0};

  /// Corners in CCW order: front-left, rear-left, rear-right, front-right.
  std::array<Vec2, 4> corners() const;
};

}  // namespace bevhd

#endif  // BEVHD__GEOMETRY_HPP_
