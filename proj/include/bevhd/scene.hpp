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

#ifndef BEVHD__SCENE_HPP_
#define BEVHD__SCENE_HPP_

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "bevhd/geometry.hpp"

namespace bevhd
{

/// Frame spacing of every scenario and the waypoint time step.
inline constexpr double kStepSeconds = 0.5;
/// Planning horizon: six 0.5 s waypoints, 3 s.
inline constexpr std::size_t kHorizonSteps = 6;

struct AgentState
{
  std::string id;
  Pose2 pose;
  double length{4.5};
  double width{1.9};
  double speed{0.0};

  OrientedBox box() const { return {pose.position(), pose.yaw, length, width}; }
};

struct Frame
{
  double t{0.0};
  Pose2 ego;
  double ego_speed{0.0};
  std::vector<AgentState> agents;
};

enum class PolylineKind { centerline, lane_divider, road_boundary, crosswalk };

std::string_view to_string(PolylineKind kind);
/// Throws std::invalid_argument on an unknown name.
PolylineKind polyline_kind_from_string(std::string_view name);

struct Polyline
{
  PolylineKind kind{PolylineKind::centerline};
  std::vector<Vec2> points;
};

struct HdMap
{
  std::vector<Polyline> polylines;
};

struct Scenario
{
  std::string name;
  std::vector<Frame> frames;
  HdMap map;
};

/// Ego-frame waypoints (x forward, y left) at kStepSeconds spacing,
/// relative to the reference frame's ego pose.
struct Trajectory
{
  std::vector<Vec2> waypoints;

  std::size_t size() const { return waypoints.size(); }
  friend bool operator==(const Trajectory &, const Trajectory &) = default;
};

struct Violation
{
  std::optional<std::size_t> frame_index;  // empty for map-level rules
  std::string rule;
  std::string detail;
};

/// Every Scenario/Frame/HdMap invariant that does not hold. Empty means valid.
std::vector<Violation> validate_scenario(const Scenario & s);

/// Raised when a horizon reaches past the last frame.
class HorizonOutOfRange : public std::out_of_range
{
public:
  using std::out_of_range::out_of_range;
};

/// Waypoint k is frame (i + k + 1)'s ego position seen from frame i's ego pose.
Trajectory ground_truth_trajectory(const Scenario & s, std::size_t frame_index, std::size_t steps);

/// Applies one rigid motion to every world-frame quantity (ego, agents, map).
Scenario transform_scenario(const Scenario & s, const Pose2 & transform);
Frame transform_frame(const Frame & f, const Pose2 & transform);
HdMap transform_map(const HdMap & map, const Pose2 & transform);

// JSON interchange. Parsing rejects unknown keys and non-finite numbers.
class FormatError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

std::string scenario_to_json(const Scenario & s);
Scenario scenario_from_json(std::string_view text);
Scenario load_scenario(const std::string & path);
void save_scenario(const Scenario & s, const std::string & path);

}  // namespace bevhd

#endif  // BEVHD__SCENE_HPP_
