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

#include "bevhd/scenario_gen.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "bevhd/bev_grid.hpp"

namespace bevhd
{

namespace
{

// cut_in ego braking: from kCutInStart at this deceleration down to half speed
constexpr double kCutInBrake = 2.5;
// map extends this far behind the start and beyond the end of the drive
constexpr double kMapMargin = 60.0;
constexpr double kMapSampling = 1.0;

}  // namespace

std::string_view to_string(ManeuverKind kind)
{
  switch (kind) {
    case ManeuverKind::straight:
      return "straight";
    case ManeuverKind::turn_left:
      return "turn_left";
    case ManeuverKind::turn_right:
      return "turn_right";
    case ManeuverKind::follow:
      return "follow";
    case ManeuverKind::cut_in:
      return "cut_in";
  }
  return "straight";
}

ManeuverKind maneuver_from_string(std::string_view name)
{
  for (auto k : {ManeuverKind::straight, ManeuverKind::turn_left, ManeuverKind::turn_right,
      ManeuverKind::follow, ManeuverKind::cut_in})
  {
    if (to_string(k) == name) {
      return k;
    }
  }
  throw std::invalid_argument("unknown maneuver kind: " + std::string(name));
}

void GenSpec::validate() const
{
  if (!(duration >= 4.0) || !std::isfinite(duration)) {
    throw std::invalid_argument("duration must be >= 4 s");
  }
  if (!(ego_speed >= 0.0) || !std::isfinite(ego_speed)) {
    throw std::invalid_argument("ego speed must be >= 0");
  }
  const bool turn = kind == ManeuverKind::turn_left || kind == ManeuverKind::turn_right;
  if (turn && (!(turn_radius > 0.0) || !std::isfinite(turn_radius))) {
    throw std::invalid_argument("turn radius must be > 0");
  }
  if (turn && turn_radius <= 1.5 * kLaneWidth) {
    throw std::invalid_argument("turn radius too small for the lane layout");
  }
  if (turn && (!(turn_angle > 0.0) || turn_angle > std::numbers::pi)) {
    throw std::invalid_argument("turn angle must be in (0, pi]");
  }
  const bool lead = kind == ManeuverKind::follow || kind == ManeuverKind::cut_in;
  if (lead && (!(lead_gap > 0.0) || !std::isfinite(lead_gap))) {
    throw std::invalid_argument("lead gap must be > 0");
  }
}

ManeuverPath::ManeuverPath(const GenSpec & spec)
: lead_in_(0.0), arc_(0.0), radius_(spec.turn_radius), sign_(0.0)
{
  if (spec.kind == ManeuverKind::turn_left || spec.kind == ManeuverKind::turn_right) {
    sign_ = spec.kind == ManeuverKind::turn_left ? 1.0 : -1.0;
    lead_in_ = kTurnLeadIn * spec.ego_speed;
    arc_ = spec.turn_radius * spec.turn_angle;
  }
}

Pose2 ManeuverPath::pose_at(double s) const
{
  if (sign_ == 0.0 || s <= lead_in_) {
    return {s, 0.0, 0.0};
  }
  if (s <= lead_in_ + arc_) {
    const double phi = (s - lead_in_) / radius_;
    return {lead_in_ + radius_ * std::sin(phi), sign_ * radius_ * (1.0 - std::cos(phi)),
      normalize_angle(sign_ * phi)};
  }
  const double phi = arc_ / radius_;
  const double heading = sign_ * phi;
  const double rest = s - lead_in_ - arc_;
  return {lead_in_ + radius_ * std::sin(phi) + rest * std::cos(heading),
    sign_ * radius_ * (1.0 - std::cos(phi)) + rest * std::sin(heading),
    normalize_angle(heading)};
}

Vec2 ManeuverPath::offset_point(double s, double lateral) const
{
  const Pose2 p = pose_at(s);
  return {p.x - lateral * std::sin(p.yaw), p.y + lateral * std::cos(p.yaw)};
}

double ego_distance(const GenSpec & spec, double t)
{
  const double v = spec.ego_speed;
  if (spec.kind != ManeuverKind::cut_in || t <= kCutInStart) {
    return v * t;
  }
  const double brake_time = 0.5 * v / kCutInBrake;
  const double s0 = v * kCutInStart;
  const double tb = std::min(t - kCutInStart, brake_time);
  const double braked = s0 + v * tb - 0.5 * kCutInBrake * tb * tb;
  return braked + 0.5 * v * std::max(0.0, t - kCutInStart - brake_time);
}

double ego_speed_at(const GenSpec & spec, double t)
{
  const double v = spec.ego_speed;
  if (spec.kind != ManeuverKind::cut_in || t <= kCutInStart) {
    return v;
  }
  return std::max(0.5 * v, v - kCutInBrake * (t - kCutInStart));
}

namespace
{

struct Dims
{
  double length;
  double width;
};

Dims agent_dims(std::uint64_t seed, std::uint64_t index)
{
  return {4.2 + 0.6 * uniform_from_counter(seed, 2 * index),
    1.8 + 0.2 * uniform_from_counter(seed, 2 * index + 1)};
}

Polyline sampled_offset(
  const ManeuverPath & path, PolylineKind kind, double lateral, double s_begin, double s_end)
{
  std::vector<double> stations;
  for (double s = s_begin; s < s_end; s += kMapSampling) {
    stations.push_back(s);
  }
  stations.push_back(s_end);
  // keep the arc endpoints exact
  for (double s : {path.lead_in_length(), path.lead_in_length() + path.arc_length()}) {
    if (s > s_begin && s < s_end) {
      stations.push_back(s);
    }
  }
  std::sort(stations.begin(), stations.end());
  stations.erase(std::unique(stations.begin(), stations.end()), stations.end());

  Polyline pl{kind, {}};
  for (double s : stations) {
    pl.points.push_back(path.offset_point(s, lateral));
  }
  return pl;
}

HdMap build_map(const ManeuverPath & path, double s_end)
{
  const double s0 = -kMapMargin;
  const double s1 = s_end + kMapMargin;
  HdMap map;
  map.polylines.push_back(sampled_offset(path, PolylineKind::centerline, 0.0, s0, s1));
  map.polylines.push_back(sampled_offset(path, PolylineKind::centerline, kLaneWidth, s0, s1));
  map.polylines.push_back(
    sampled_offset(path, PolylineKind::lane_divider, 0.5 * kLaneWidth, s0, s1));
  map.polylines.push_back(
    sampled_offset(path, PolylineKind::road_boundary, -0.5 * kLaneWidth, s0, s1));
  map.polylines.push_back(
    sampled_offset(path, PolylineKind::road_boundary, 1.5 * kLaneWidth, s0, s1));
  return map;
}

AgentState straight_agent(
  std::string id, Dims dims, double x, double y, double vx, double vy)
{
  AgentState a;
  a.id = std::move(id);
  a.length = dims.length;
  a.width = dims.width;
  a.speed = std::hypot(vx, vy);
  a.pose = {x, y, a.speed > 0.0 ? normalize_angle(std::atan2(vy, vx)) : 0.0};
  return a;
}

}  // namespace

Scenario generate(const GenSpec & spec)
{
  spec.validate();
  const ManeuverPath path(spec);
  const auto frame_count = static_cast<std::size_t>(std::floor(spec.duration / kStepSeconds)) + 1;

  Scenario sc;
  sc.name = std::string(to_string(spec.kind));
  const double v = spec.ego_speed;
  const Dims d0 = agent_dims(spec.seed, 0);
  const Dims d1 = agent_dims(spec.seed, 1);
  const double straight_head_start = 20.0 + 5.0 * uniform_from_counter(spec.seed, 100);

  for (std::size_t i = 0; i < frame_count; ++i) {
    const double t = kStepSeconds * static_cast<double>(i);
    Frame f;
    f.t = t;
    const double s = ego_distance(spec, t);
    f.ego = path.pose_at(s);
    f.ego_speed = ego_speed_at(spec, t);

    switch (spec.kind) {
      case ManeuverKind::straight:
        // slower vehicle in the adjacent lane that the ego overtakes
        f.agents.push_back(
          straight_agent("adjacent", d0, straight_head_start + 0.7 * v * t, kLaneWidth, 0.7 * v, 0.0));
        break;
      case ManeuverKind::turn_left:
      case ManeuverKind::turn_right:
        break;
      case ManeuverKind::follow: {
          const Pose2 lead = path.pose_at(s + spec.lead_gap);
          AgentState a = straight_agent("lead", d0, lead.x, lead.y, v, 0.0);
          a.pose.yaw = lead.yaw;
          f.agents.push_back(std::move(a));
          break;
        }
      case ManeuverKind::cut_in: {
          f.agents.push_back(straight_agent("lead", d0, spec.lead_gap + v * t, 0.0, v, 0.0));
          const double merge_t = std::max(0.0, t - kCutInStart);
          const double y = std::max(0.0, kLaneWidth - kCutInLateralSpeed * merge_t);
          const bool merging = t >= kCutInStart && y > 0.0;
          f.agents.push_back(
            straight_agent(
              "cut_in", d1, spec.lead_gap + 5.0 + 0.6 * v * t, y, 0.6 * v,
              merging ? -kCutInLateralSpeed : 0.0));
          break;
        }
    }
    sc.frames.push_back(std::move(f));
  }
  sc.map = build_map(path, ego_distance(spec, spec.duration));
  return sc;
}

std::vector<Scenario> standard_suite(std::uint64_t seed)
{
  std::vector<Scenario> out;
  for (auto kind : {ManeuverKind::straight, ManeuverKind::turn_left, ManeuverKind::turn_right,
      ManeuverKind::follow, ManeuverKind::cut_in})
  {
    GenSpec spec;
    spec.kind = kind;
    spec.seed = seed;
    out.push_back(generate(spec));
  }
  return out;
}

}  // namespace bevhd
