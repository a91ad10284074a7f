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

#include "bevhd/geometry.hpp"

#include <algorithm>

namespace bevhd
{

double normalize_angle(double angle)
{
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double wrapped = angle - two_pi * std::floor((angle + std::numbers::pi) / two_pi);
  // floor() can land exactly on +pi after rounding
  if (wrapped >= std::numbers::pi) {
    wrapped -= two_pi;
  }
  if (wrapped < -std::numbers::pi) {
    wrapped = -std::numbers::pi;
  }
  return wrapped;
}

Vec2 world_to_ego(const Pose2 & ego, Vec2 p)
{
  const double c = std::cos(ego.yaw);
  const double s = std::sin(ego.yaw);
  const double dx = p.x - ego.x;
  const double dy = p.y - ego.y;
  return {c * dx + s * dy, -s * dx + c * dy};
}

Vec2 ego_to_world(const Pose2 & ego, Vec2 p)
{
  const double c = std::cos(ego.yaw);
  const double s = std::sin(ego.yaw);
  return {ego.x + c * p.x - s * p.y, ego.y + s * p.x + c * p.y};
}

double yaw_to_ego(const Pose2 & ego, double yaw) { return normalize_angle(yaw - ego.yaw); }

Pose2 compose(const Pose2 & transform, const Pose2 & pose)
{
  const Vec2 p = ego_to_world(transform, pose.position());
  return {p.x, p.y, normalize_angle(transform.yaw + pose.yaw)};
}

Vec2 compose(const Pose2 & transform, Vec2 p) { return ego_to_world(transform, p); }

double snap_nm(double v) { return std::round(v * 1e9) / 1e9; }

std::optional<Segment> clip_segment(Vec2 a, Vec2 b, Vec2 lo, Vec2 hi)
{
  const Vec2 d = b - a;
  double t0 = 0.0;
  double t1 = 1.0;
  const std::array<double, 4> p{-d.x, d.x, -d.y, d.y};
  const std::array<double, 4> q{a.x - lo.x, hi.x - a.x, a.y - lo.y, hi.y - a.y};
  for (std::size_t i = 0; i < 4; ++i) {
    if (p[i] == 0.0) {
      if (q[i] < 0.0) {
        return std::nullopt;
      }
      continue;
    }
    const double r = q[i] / p[i];
    if (p[i] < 0.0) {
      if (r > t1) {
        return std::nullopt;
      }
      t0 = std::max(t0, r);
    } else {
      if (r < t0) {
        return std::nullopt;
      }
      t1 = std::min(t1, r);
    }
  }
  Segment out{t0 == 0.0 ? a : a + t0 * d, t1 == 1.0 ? b : a + t1 * d};
  // pin the clipped coordinate exactly onto the boundary it was clipped against
  auto pin = [&](Vec2 & v) {
      v.x = std::clamp(v.x, lo.x, hi.x);
      v.y = std::clamp(v.y, lo.y, hi.y);
    };
  pin(out.a);
  pin(out.b);
  return out;
}

std::array<Vec2, 4> OrientedBox::corners() const
{
  const Vec2 fwd{std::cos(yaw), std::sin(yaw)};
  const Vec2 left{-fwd.y, fwd.x};
  const Vec2 hl = (0.5 * length) * fwd;
  const Vec2 hw = (0.5 * width) * left;
  return {center + hl + hw, center - hl + hw, center - hl - hw, center + hl - hw};
}

}  // namespace bevhd
