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

#ifndef BEVHD__PLANNERS_HPP_
#define BEVHD__PLANNERS_HPP_

#include <cstddef>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "bevhd/bev_grid.hpp"
#include "bevhd/feature_viz.hpp"
#include "bevhd/scene.hpp"
#include "bevhd/waypoint_codec.hpp"
#include "bevhd/wire_protocol.hpp"

namespace bevhd
{

inline constexpr int kPromptVersion = 1;

/// Fixed, versioned instruction text. Carries no scene description.
std::string build_prompt(std::size_t horizon_steps, const GridSpec & grid = default_grid());

/// Straight ahead at the current speed.
Trajectory plan_constant_velocity(const Frame & frame, std::size_t horizon_steps);

/// Advance along the nearest centerline by speed * t. Throws std::invalid_argument
/// when the map has no centerline.
Trajectory plan_lane_follow(const Frame & frame, const HdMap & map, std::size_t horizon_steps);

Trajectory plan_oracle(const Scenario & s, std::size_t frame_index, std::size_t horizon_steps);

enum class PlannerKind { oracle, constant_velocity, lane_follow, remote, mock };

struct PlannerRegistryEntry
{
  std::string name;
  PlannerKind kind;
};

const std::vector<PlannerRegistryEntry> & planner_registry();
/// Throws std::invalid_argument for unknown names.
PlannerKind planner_kind_from_string(std::string_view name);
std::string_view to_string(PlannerKind kind);

/// Everything a planner may look at for one sample.
struct PlanContext
{
  const Scenario & scenario;
  std::size_t frame_index;
  const RgbImage & bev_hd;
  std::size_t horizon_steps;
  const TokenVocab & vocab;
  const GridSpec & grid;
};

class Planner
{
public:
  virtual ~Planner() = default;
  virtual std::string name() const = 0;
  virtual PlanResponse plan(const PlanContext & ctx) = 0;
  /// Planners that never look at the image let the harness skip rendering.
  virtual bool needs_image() const { return false; }
};

struct RemoteOptions
{
  std::string endpoint;
  double timeout_s{30.0};
  int retries{2};
  int max_in_flight{4};
  double backoff_s{0.1};
};

struct PlannerConfig
{
  PlannerKind kind{PlannerKind::oracle};
  RemoteOptions remote;
  Vec2 mock_offset{1.0, 0.0};  // added to ground truth by the `mock` kind
};

std::unique_ptr<Planner> make_planner(const PlannerConfig & config);

}  // namespace bevhd

#endif  // BEVHD__PLANNERS_HPP_
