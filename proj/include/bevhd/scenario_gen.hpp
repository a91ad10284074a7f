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

#ifndef BEVHD__SCENARIO_GEN_HPP_
#define BEVHD__SCENARIO_GEN_HPP_

#include <cstdint>
#include <numbers>
#include <string>
#include <string_view>
#include <vector>

#include "bevhd/scene.hpp"

namespace bevhd
{

enum class ManeuverKind { straight, turn_left, turn_right, follow, cut_in };

std::string_view to_string(ManeuverKind kind);
ManeuverKind maneuver_from_string(std::string_view name);

struct GenSpec
{
  ManeuverKind kind{ManeuverKind::straight};
  double duration{20.0};     // s, >= 4
  double ego_speed{10.0};    // m/s
  double turn_radius{20.0};  // m, turn kinds
  double turn_angle{std::numbers::pi / 2.0};  // rad swept by the arc before the exit straight
  double lead_gap{15.0};     // m, follow / cut_in
  std::uint64_t seed{0};

  /// Throws std::invalid_argument when the spec cannot produce a valid scenario.
  void validate() const;
};

/// Lane geometry shared by the generator and its tests.
inline constexpr double kLaneWidth = 3.5;
/// Straight lead-in before a turn's arc.
inline constexpr double kTurnLeadIn = 2.0;
/// cut_in: lateral merge speed of the cutting-in agent and when it starts.
inline constexpr double kCutInLateralSpeed = 1.0;
inline constexpr double kCutInStart = 2.0;

/**
 * @brief Reference path of a maneuver, parametrized by arc length.
 *
 * Straight kinds run along world +x. Turns run straight for the lead-in,
 * sweep a constant-radius arc, then continue straight. Negative arc length
 * extends the initial straight backwards.
 */
class ManeuverPath
{
public:
  explicit ManeuverPath(const GenSpec & spec);

  Pose2 pose_at(double s) const;
  /// Point offset `lateral` metres to the left of the path at `s`.
  Vec2 offset_point(double s, double lateral) const;
  double lead_in_length() const { return lead_in_; }
  double arc_length() const { return arc_; }

private:
  double lead_in_;
  double arc_;
  double radius_;
  double sign_;  // +1 left, -1 right, 0 straight
};

/// Ego arc length travelled by time t (cut_in brakes after the merge starts).
double ego_distance(const GenSpec & spec, double t);
double ego_speed_at(const GenSpec & spec, double t);

Scenario generate(const GenSpec & spec);

/// One scenario per maneuver kind with default parameters.
std::vector<Scenario> standard_suite(std::uint64_t seed);

}  // namespace bevhd

#endif  // BEVHD__SCENARIO_GEN_HPP_
