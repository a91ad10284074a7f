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

#ifndef UNIT__TEST_UTIL_HPP_
#define UNIT__TEST_UTIL_HPP_

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <random>
#include <string>

#include "bevhd/scene.hpp"

namespace test_util
{

/// Ego driving along world +x at constant speed; no agents, no map.
inline bevhd::Scenario straight_scenario(double speed, std::size_t frames)
{
  bevhd::Scenario s;
  s.name = "straight_cv";
  for (std::size_t i = 0; i < frames; ++i) {
    bevhd::Frame f;
    f.t = 0.5 * static_cast<double>(i);
    f.ego = {speed * f.t, 0.0, 0.0};
    f.ego_speed = speed;
    s.frames.push_back(f);
  }
  return s;
}

/// CCW circle of `radius` starting at the origin heading +x.
inline bevhd::Pose2 circle_pose(double radius, double speed, double t)
{
  const double th = speed * t / radius;
  return {radius * std::sin(th), radius * (1.0 - std::cos(th)), bevhd::normalize_angle(th)};
}

inline bevhd::Scenario circle_scenario(double radius, double speed, std::size_t frames)
{
  bevhd::Scenario s;
  s.name = "circle";
  for (std::size_t i = 0; i < frames; ++i) {
    bevhd::Frame f;
    f.t = 0.5 * static_cast<double>(i);
    f.ego = circle_pose(radius, speed, f.t);
    f.ego_speed = speed;
    s.frames.push_back(f);
  }
  return s;
}

inline bevhd::Pose2 random_pose(std::mt19937_64 & rng, double range = 1000.0)
{
  std::uniform_real_distribution<double> pos(-range, range);
  std::uniform_real_distribution<double> ang(-M_PI, M_PI);
  return {pos(rng), pos(rng), bevhd::normalize_angle(ang(rng))};
}

/// Fresh empty directory under the system temp dir.
inline std::filesystem::path temp_dir(const std::string & tag)
{
  static std::mt19937_64 rng{std::random_device{}()};
  auto dir = std::filesystem::temp_directory_path() /
    ("bevhd_" + tag + "_" + std::to_string(rng() % 1000000000));
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline std::string read_file(const std::filesystem::path & p)
{
  std::ifstream in(p, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

}  // namespace test_util

#endif  // UNIT__TEST_UTIL_HPP_
