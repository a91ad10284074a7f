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

#include <gtest/gtest.h>

#include <cmath>

#include "bevhd/eval_metrics.hpp"
#include "bevhd/planners.hpp"
#include "bevhd/scenario_gen.hpp"

namespace bevhd
{
namespace
{

GenSpec spec_of(ManeuverKind kind, std::uint64_t seed = 0)
{
  GenSpec s;
  s.kind = kind;
  s.seed = seed;
  return s;
}

TEST(ScenarioGen, NamesAndFrameCount)
{
  const auto suite = standard_suite(0);
  ASSERT_EQ(suite.size(), 5u);
  const char * names[] = {"straight", "turn_left", "turn_right", "follow", "cut_in"};
  for (std::size_t i = 0; i < 5; ++i) {
    EXPECT_EQ(suite[i].name, names[i]);
    EXPECT_EQ(suite[i].frames.size(), 41u);
    EXPECT_EQ(maneuver_from_string(names[i]), static_cast<ManeuverKind>(i));
    EXPECT_TRUE(validate_scenario(suite[i]).empty());
  }
  EXPECT_THROW(maneuver_from_string("u_turn"), std::invalid_argument);
}

TEST(ScenarioGen, StraightExample)
{
  const Scenario s = generate(spec_of(ManeuverKind::straight));
  for (const auto & f : s.frames) {
    EXPECT_DOUBLE_EQ(f.ego.x, 10.0 * f.t);
    EXPECT_EQ(f.ego.y, 0.0);
    EXPECT_EQ(f.ego.yaw, 0.0);
    EXPECT_EQ(f.ego_speed, 10.0);
  }
  EXPECT_DOUBLE_EQ(s.frames[4].t, 2.0);
}

TEST(ScenarioGen, TurnYawRate)
{
  for (auto kind : {ManeuverKind::turn_left, ManeuverKind::turn_right}) {
    const Scenario s = generate(spec_of(kind));
    const double sign = kind == ManeuverKind::turn_left ? 1.0 : -1.0;
    // Lead-in ends at t = 2 s; the quarter arc of 20 m at 10 m/s lasts pi s.
    for (std::size_t i = 0; i < 4; ++i) {
      EXPECT_NEAR(s.frames[i + 1].ego.yaw - s.frames[i].ego.yaw, 0.0, 1e-12);
    }
    for (std::size_t i = 4; i < 10; ++i) {
      EXPECT_NEAR(s.frames[i + 1].ego.yaw - s.frames[i].ego.yaw, sign * 0.25, 1e-12) << i;
    }
    for (std::size_t i = 11; i + 1 < s.frames.size(); ++i) {
      EXPECT_NEAR(s.frames[i + 1].ego.yaw - s.frames[i].ego.yaw, 0.0, 1e-12);
    }
    EXPECT_NEAR(s.frames.back().ego.yaw, sign * M_PI / 2, 1e-12);
  }
}

TEST(ScenarioGen, FollowLeadKeepsGapAlongPath)
{
  const Scenario s = generate(spec_of(ManeuverKind::follow));
  for (const auto & f : s.frames) {
    ASSERT_EQ(f.agents.size(), 1u);
    EXPECT_EQ(f.agents[0].id, "lead");
    EXPECT_NEAR(f.agents[0].pose.x, f.ego.x + 15.0, 1e-9);
    EXPECT_NEAR(f.agents[0].pose.y, 0.0, 1e-12);
    EXPECT_EQ(f.agents[0].speed, 10.0);
  }
}

TEST(ScenarioGen, ManeuverPathGeometry)
{
  GenSpec spec = spec_of(ManeuverKind::turn_left);
  spec.turn_radius = 25.0;
  const ManeuverPath path(spec);
  EXPECT_EQ(path.lead_in_length(), 20.0);
  EXPECT_NEAR(path.arc_length(), 25.0 * M_PI / 2, 1e-12);
  const Pose2 end = path.pose_at(20.0 + path.arc_length());
  EXPECT_NEAR(end.x, 45.0, 1e-9);
  EXPECT_NEAR(end.y, 25.0, 1e-9);
  EXPECT_NEAR(end.yaw, M_PI / 2, 1e-12);
  const Pose2 back = path.pose_at(-5.0);
  EXPECT_EQ(back.x, -5.0);
  const Vec2 left = path.offset_point(20.0 + path.arc_length(), 3.5);
  EXPECT_NEAR(left.x, 41.5, 1e-9);
  // Arc chords between frames match the circle.
  const Scenario s = generate(spec);
  for (std::size_t i = 5; i < 10; ++i) {
    const double ds = 5.0;
    EXPECT_NEAR(
      norm(s.frames[i + 1].ego.position() - s.frames[i].ego.position()),
      2.0 * 25.0 * std::sin(ds / 25.0 / 2.0), 1e-9);
  }
}

TEST(ScenarioGen, KinematicConsistency)
{
  for (const auto & sc : standard_suite(9)) {
    for (std::size_t i = 0; i + 1 < sc.frames.size(); ++i) {
      const Frame & a = sc.frames[i];
      const Frame & b = sc.frames[i + 1];
      const double dist = norm(b.ego.position() - a.ego.position());
      const double avg_speed = 0.5 * (a.ego_speed + b.ego_speed);
      // Chords on the arc are shorter than the travelled arc length.
      EXPECT_LE(dist, avg_speed * kStepSeconds + 1e-9) << sc.name << " " << i;
      EXPECT_GE(dist, 0.99 * avg_speed * kStepSeconds - 1e-9) << sc.name << " " << i;
    }
  }
}

TEST(ScenarioGen, CutInBrakesToHalfSpeed)
{
  const GenSpec spec = spec_of(ManeuverKind::cut_in);
  EXPECT_EQ(ego_speed_at(spec, 0.0), 10.0);
  EXPECT_EQ(ego_speed_at(spec, 2.0), 10.0);
  EXPECT_EQ(ego_speed_at(spec, 20.0), 5.0);
  EXPECT_EQ(ego_distance(spec, 1.0), 10.0);
  double prev = 0.0;
  for (double t = 0.0; t <= 20.0; t += 0.25) {
    const double d = ego_distance(spec, t);
    EXPECT_GE(d, prev);
    prev = d;
  }
  const Scenario s = generate(spec);
  EXPECT_EQ(s.frames[0].agents.size(), 2u);
  EXPECT_EQ(s.frames[0].agents[1].pose.y, kLaneWidth);
  EXPECT_EQ(s.frames.back().agents[1].pose.y, 0.0);
}

TEST(ScenarioGen, GroundTruthCollisionFree)
{
  for (std::uint64_t seed : {0u, 1u, 17u}) {
    for (const auto & sc : standard_suite(seed)) {
      for (std::size_t i = 0; i + 6 < sc.frames.size(); ++i) {
        const auto flags =
          collision_flags(default_grid(), {}, ground_truth_trajectory(sc, i, 6), sc, i);
        for (bool f : flags) {
          ASSERT_FALSE(f) << sc.name << " seed " << seed << " frame " << i;
        }
      }
    }
  }
}

TEST(ScenarioGen, ConstantVelocityHitsTheCutInVehicle)
{
  const Scenario sc = generate(spec_of(ManeuverKind::cut_in));
  std::vector<std::vector<bool>> cv;
  for (std::size_t i = 0; i + 6 < sc.frames.size(); ++i) {
    cv.push_back(collision_flags(
      default_grid(), {}, plan_constant_velocity(sc.frames[i], 6), sc, i));
  }
  EXPECT_GT(collision_rate(cv, Horizon::s3), 0.0);
}

TEST(ScenarioGen, DeterministicPerSeed)
{
  for (auto kind : {ManeuverKind::straight, ManeuverKind::cut_in, ManeuverKind::turn_right}) {
    EXPECT_EQ(scenario_to_json(generate(spec_of(kind, 5))), scenario_to_json(generate(spec_of(kind, 5))));
  }
  EXPECT_NE(
    scenario_to_json(generate(spec_of(ManeuverKind::straight, 5))),
    scenario_to_json(generate(spec_of(ManeuverKind::straight, 6))));
}

TEST(ScenarioGen, ValidForManySeedsAndParameters)
{
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    for (const auto & sc : standard_suite(seed)) {
      ASSERT_TRUE(validate_scenario(sc).empty()) << sc.name << " seed " << seed;
    }
  }
  GenSpec spec = spec_of(ManeuverKind::turn_right);
  spec.turn_radius = 60.0;
  spec.turn_angle = M_PI;
  spec.ego_speed = 15.0;
  spec.duration = 4.0;
  const Scenario s = generate(spec);
  EXPECT_EQ(s.frames.size(), 9u);
  EXPECT_TRUE(validate_scenario(s).empty());
}

TEST(ScenarioGen, RejectsInvalidSpecs)
{
  GenSpec s;
  s.duration = 3.0;
  EXPECT_THROW(generate(s), std::invalid_argument);
  s = GenSpec{};
  s.ego_speed = -1.0;
  EXPECT_THROW(generate(s), std::invalid_argument);
  s = spec_of(ManeuverKind::turn_left);
  s.turn_radius = 5.0;
  EXPECT_THROW(generate(s), std::invalid_argument);
  s.turn_radius = 20.0;
  s.turn_angle = 0.0;
  EXPECT_THROW(generate(s), std::invalid_argument);
  s = spec_of(ManeuverKind::follow);
  s.lead_gap = 0.0;
  EXPECT_THROW(generate(s), std::invalid_argument);
}

}  // namespace
}  // namespace bevhd
