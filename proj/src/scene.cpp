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

#include "bevhd/scene.hpp"

#include <cmath>
#include <numbers>
#include <set>

namespace bevhd
{

std::string_view to_string(PolylineKind kind)
{
  switch (kind) {
    case PolylineKind::centerline:
      return "centerline";
    case PolylineKind::lane_divider:
      return "lane_divider";
    case PolylineKind::road_boundary:
      return "road_boundary";
    case PolylineKind::crosswalk:
      return "crosswalk";
  }
  return "centerline";
}

PolylineKind polyline_kind_from_string(std::string_view name)
{
  for (auto kind : {PolylineKind::centerline, PolylineKind::lane_divider,
      PolylineKind::road_boundary, PolylineKind::crosswalk})
  {
    if (to_string(kind) == name) {
      return kind;
    }
  }
  throw std::invalid_argument("unknown polyline kind: " + std::string(name));
}

namespace
{

bool finite_pose(const Pose2 & p)
{
  return std::isfinite(p.x) && std::isfinite(p.y) && std::isfinite(p.yaw);
}

bool normalized_yaw(double yaw)
{
  return yaw >= -std::numbers::pi && yaw < std::numbers::pi;
}

}  // namespace

std::vector<Violation> validate_scenario(const Scenario & s)
{
  std::vector<Violation> out;
  auto add = [&out](std::optional<std::size_t> i, std::string rule, std::string detail) {
      out.push_back({i, std::move(rule), std::move(detail)});
    };

  for (std::size_t i = 0; i < s.frames.size(); ++i) {
    const Frame & f = s.frames[i];
    if (!std::isfinite(f.t)) {
      add(i, "finite", "frame time is not finite");
    }
    if (!finite_pose(f.ego)) {
      add(i, "finite", "ego pose is not finite");
    } else if (!normalized_yaw(f.ego.yaw)) {
      add(i, "yaw_range", "ego yaw outside [-pi, pi)");
    }
    if (!std::isfinite(f.ego_speed) || f.ego_speed < 0.0) {
      add(i, "speed", "ego speed must be finite and >= 0");
    }
    if (i > 0) {
      const double dt = f.t - s.frames[i - 1].t;
      if (!(dt > 0.0)) {
        add(i, "time_order", "frames not strictly time-ordered");
      } else if (std::abs(dt - kStepSeconds) > 1e-9) {
        add(i, "spacing", "frame spacing " + std::to_string(dt) + " s, expected 0.5 s");
      }
    }
    std::set<std::string> ids;
    for (const auto & a : f.agents) {
      if (!ids.insert(a.id).second) {
        add(i, "agent_id_unique", "duplicate agent id '" + a.id + "'");
      }
      if (!finite_pose(a.pose)) {
        add(i, "finite", "agent '" + a.id + "' pose is not finite");
      } else if (!normalized_yaw(a.pose.yaw)) {
        add(i, "yaw_range", "agent '" + a.id + "' yaw outside [-pi, pi)");
      }
      if (!(a.length > 0.0) || !(a.width > 0.0) || !std::isfinite(a.length) ||
        !std::isfinite(a.width))
      {
        add(i, "agent_size", "agent '" + a.id + "' needs positive finite length and width");
      }
      if (!std::isfinite(a.speed) || a.speed < 0.0) {
        add(i, "speed", "agent '" + a.id + "' speed must be finite and >= 0");
      }
    }
  }

  for (std::size_t k = 0; k < s.map.polylines.size(); ++k) {
    const auto & pl = s.map.polylines[k];
    if (pl.points.size() < 2) {
      add(std::nullopt, "polyline_points", "polyline " + std::to_string(k) + " has < 2 points");
    }
    for (const auto & p : pl.points) {
      if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
        add(std::nullopt, "finite", "polyline " + std::to_string(k) + " has a non-finite point");
        break;
      }
    }
  }
  return out;
}

Trajectory ground_truth_trajectory(const Scenario & s, std::size_t frame_index, std::size_t steps)
{
  if (frame_index + steps >= s.frames.size()) {
    throw HorizonOutOfRange(
            "horizon of " + std::to_string(steps) + " steps from frame " +
            std::to_string(frame_index) + " exceeds scenario '" + s.name + "' (" +
            std::to_string(s.frames.size()) + " frames)");
  }
  const Pose2 & ref = s.frames[frame_index].ego;
  Trajectory traj;
  traj.waypoints.reserve(steps);
  for (std::size_t k = 0; k < steps; ++k) {
    traj.waypoints.push_back(world_to_ego(ref, s.frames[frame_index + k + 1].ego.position()));
  }
  return traj;
}

Frame transform_frame(const Frame & f, const Pose2 & transform)
{
  Frame out = f;
  out.ego = compose(transform, f.ego);
  for (auto & a : out.agents) {
    a.pose = compose(transform, a.pose);
  }
  return out;
}

HdMap transform_map(const HdMap & map, const Pose2 & transform)
{
  HdMap out = map;
  for (auto & pl : out.polylines) {
    for (auto & p : pl.points) {
      p = compose(transform, p);
    }
  }
  return out;
}

Scenario transform_scenario(const Scenario & s, const Pose2 & transform)
{
  Scenario out;
  out.name = s.name;
  out.frames.reserve(s.frames.size());
  for (const auto & f : s.frames) {
    out.frames.push_back(transform_frame(f, transform));
  }
  out.map = transform_map(s.map, transform);
  return out;
}

}  // namespace bevhd
