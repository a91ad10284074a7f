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

#ifndef BEVHD__EVAL_METRICS_HPP_
#define BEVHD__EVAL_METRICS_HPP_

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "bevhd/bev_grid.hpp"
#include "bevhd/hdmap_overlay.hpp"
#include "bevhd/planners.hpp"
#include "bevhd/scene.hpp"
#include "bevhd/waypoint_codec.hpp"

namespace bevhd
{

enum class Horizon { s1 = 1, s2 = 2, s3 = 3 };

inline constexpr std::array<Horizon, 3> kHorizons{Horizon::s1, Horizon::s2, Horizon::s3};

/// Number of 0.5 s steps up to and including the horizon.
constexpr std::size_t steps_of(Horizon h) { return 2 * static_cast<std::size_t>(h); }

/// Euclidean error per step, 0.5 s ... 3.0 s.
struct StepErrors
{
  std::vector<double> e;
};

/// Throws std::invalid_argument on a length mismatch.
StepErrors l2_per_step(const Trajectory & pred, const Trajectory & gt);

/// ST-P3 reading: mean of every step up to the horizon.
double l2_stp3(const StepErrors & e, Horizon h);
/// UniAD reading: the error at the horizon step.
double l2_uniad(const StepErrors & e, Horizon h);

struct EgoBoxSpec
{
  double length{4.08};
  double width{1.73};

  void validate() const;
};

/// Heading per waypoint from finite differences; zero-length steps keep the previous heading.
std::vector<double> reconstruct_headings(const Trajectory & traj);

/// Ego rectangle at `waypoint`/`heading` (reference ego frame) against the agents of the
/// future frame, both rasterized on `spec`; true iff any cell is shared.
bool collision_at_step(
  const GridSpec & spec, const EgoBoxSpec & ego_box, Vec2 waypoint, double heading,
  const Pose2 & reference_ego, std::span<const AgentState> future_agents);

/// Per-step collision flags of `pred` issued at `frame_index`. Throws HorizonOutOfRange
/// when a future frame is missing.
std::vector<bool> collision_flags(
  const GridSpec & spec, const EgoBoxSpec & ego_box, const Trajectory & pred,
  const Scenario & scenario, std::size_t frame_index);

/// Per-step collision fractions averaged over the steps up to the horizon.
double collision_rate(std::span<const std::vector<bool>> per_sample_flags, Horizon h);

struct CollisionCase
{
  const Trajectory * prediction;
  const Scenario * scenario;
  std::size_t frame_index;
};

double collision_rate(
  std::span<const CollisionCase> cases, Horizon h, const GridSpec & spec = default_grid(),
  const EgoBoxSpec & ego_box = {});

/// Values at 1 s, 2 s, 3 s and their arithmetic mean.
struct HorizonTriple
{
  std::array<double, 3> at{0.0, 0.0, 0.0};
  double avg{0.0};

  static HorizonTriple from(double s1, double s2, double s3);
};

struct MetricsReport
{
  std::string planner;
  HorizonTriple l2_avg;
  HorizonTriple l2_max;
  HorizonTriple collision_rate;  // fraction in [0, 1]
  std::size_t samples{0};
  std::size_t skipped{0};
  std::size_t clamped{0};
  double mean_latency_s{0.0};
};

enum class FailurePolicy { abort, skip };

struct EvalConfig
{
  GridSpec grid;
  TokenVocab vocab;
  RenderStyle style;
  EgoBoxSpec ego_box;
  FailurePolicy failure_policy{FailurePolicy::abort};
  int workers{1};
  /// Pass waypoint answers through encode/decode, as a token-emitting planner would.
  bool route_through_codec{false};
  int channels{8};
  std::uint64_t seed{0};
  bool agent_boxes{false};
  /// Record wall-clock planner latency. Off makes reports byte-stable for any planner.
  bool record_latency{true};
  /// When non-empty, an overlay PPM per sample is written here.
  std::string overlay_dir;
};

struct SampleResult
{
  std::string scenario;
  std::size_t frame{0};
  StepErrors errors;
  std::vector<bool> collisions;
  double latency_s{0.0};
  bool clamped{false};
  bool skipped{false};
  std::string error;
};

struct EvalResult
{
  MetricsReport report;
  std::vector<SampleResult> samples;
};

/// Raised under FailurePolicy::abort; carries the first failing sample.
class EvaluationAborted : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// Open-loop evaluation over every frame with a full 3 s future.
EvalResult evaluate(Planner & planner, std::span<const Scenario> scenarios, const EvalConfig & config);

/// Mean over samples in sample order.
MetricsReport aggregate(const std::string & planner, std::span<const SampleResult> samples);

/// Canonical key order, shortest round-trip numbers.
std::string report_to_json(const MetricsReport & report);
std::string report_to_table(const MetricsReport & report);
/// scenario,frame,e1..e6,collision1..collision6,latency_s,clamped
std::string samples_to_csv(std::span<const SampleResult> samples);

/// Shortest round-trip decimal.
std::string format_double(double v);

}  // namespace bevhd

#endif  // BEVHD__EVAL_METRICS_HPP_
