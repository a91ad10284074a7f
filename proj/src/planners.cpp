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

#include "bevhd/planners.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

#include "bevhd/remote_planner.hpp"

namespace bevhd
{

namespace
{

std::string fmt_g(double v)
{
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

}  // namespace

std::string build_prompt(std::size_t horizon_steps, const GridSpec & grid)
{
  if (horizon_steps < 1) {
    throw std::invalid_argument("build_prompt: horizon_steps must be >= 1");
  }
  const std::string n = std::to_string(horizon_steps);
  std::string p;
  p += "[bevhd-prompt v" + std::to_string(kPromptVersion) + "]\n";
  p += "The image is a BEV-HD Map: a bird's-eye-view feature visualization of the area around ";
  p += "the ego vehicle with the aligned HD map drawn on top.\n";
  p += "The ego vehicle sits at the image centre facing right; image right is forward and image ";
  p += "up is the vehicle's left.\n";
  p += "The map covers +-" + fmt_g(grid.extent) + " m in both directions at " +
    fmt_g(grid.cell_size()) + " m per pixel (" + std::to_string(grid.width_cells) + "x" +
    std::to_string(grid.height_cells) + " pixels).\n";
  p += "Generate the ego trajectory: output exactly " + n + " waypoint tokens, one per " +
    fmt_g(kStepSeconds) + " s step, covering the next " +
    fmt_g(kStepSeconds * static_cast<double>(horizon_steps)) + " s.\n";
  return p;
}

Trajectory plan_constant_velocity(const Frame & frame, std::size_t horizon_steps)
{
  if (!(frame.ego_speed >= 0.0)) {
    throw std::invalid_argument("constant velocity: ego speed must be >= 0");
  }
  Trajectory t;
  for (std::size_t k = 0; k < horizon_steps; ++k) {
    t.waypoints.push_back({frame.ego_speed * kStepSeconds * static_cast<double>(k + 1), 0.0});
  }
  return t;
}

namespace
{

struct CenterlineProjection
{
  const Polyline * line{nullptr};
  std::size_t segment{0};
  Vec2 point;
  double dist2{std::numeric_limits<double>::infinity()};
};

CenterlineProjection project_onto_centerlines(const HdMap & map, Vec2 p)
{
  CenterlineProjection best;
  for (const auto & pl : map.polylines) {
    if (pl.kind != PolylineKind::centerline) {
      continue;
    }
    for (std::size_t s = 0; s + 1 < pl.points.size(); ++s) {
      const Vec2 a = pl.points[s];
      const Vec2 d = pl.points[s + 1] - a;
      const double len2 = dot(d, d);
      const double t = len2 > 0.0 ? std::clamp(dot(p - a, d) / len2, 0.0, 1.0) : 0.0;
      const Vec2 q = a + t * d;
      const Vec2 diff = p - q;
      const double d2 = dot(diff, diff);
      if (d2 < best.dist2) {
        best = {&pl, s, q, d2};
      }
    }
  }
  return best;
}

Vec2 advance_along(const Polyline & line, std::size_t segment, Vec2 from, double distance)
{
  const auto & pts = line.points;
  Vec2 cur = from;
  for (std::size_t s = segment; s + 1 < pts.size(); ++s) {
    const Vec2 end = pts[s + 1];
    const double len = norm(end - cur);
    if (distance <= len && len > 0.0) {
      return cur + (distance / len) * (end - cur);
    }
    distance -= len;
    cur = end;
  }
  // past the end: continue along the last non-degenerate segment
  for (std::size_t s = pts.size() - 1; s > 0; --s) {
    const Vec2 d = pts[s] - pts[s - 1];
    const double len = norm(d);
    if (len > 0.0) {
      return cur + (distance / len) * d;
    }
  }
  return cur;
}

}  // namespace

Trajectory plan_lane_follow(const Frame & frame, const HdMap & map, std::size_t horizon_steps)
{
  const CenterlineProjection proj = project_onto_centerlines(map, frame.ego.position());
  if (proj.line == nullptr) {
    throw std::invalid_argument("lane follow: map has no centerline segment");
  }
  Trajectory t;
  for (std::size_t k = 0; k < horizon_steps; ++k) {
    const double s = frame.ego_speed * kStepSeconds * static_cast<double>(k + 1);
    t.waypoints.push_back(
      world_to_ego(frame.ego, advance_along(*proj.line, proj.segment, proj.point, s)));
  }
  return t;
}

Trajectory plan_oracle(const Scenario & s, std::size_t frame_index, std::size_t horizon_steps)
{
  return ground_truth_trajectory(s, frame_index, horizon_steps);
}

const std::vector<PlannerRegistryEntry> & planner_registry()
{
  static const std::vector<PlannerRegistryEntry> registry{
    {"oracle", PlannerKind::oracle},
    {"constant_velocity", PlannerKind::constant_velocity},
    {"lane_follow", PlannerKind::lane_follow},
    {"remote", PlannerKind::remote},
    {"mock", PlannerKind::mock},
  };
  return registry;
}

PlannerKind planner_kind_from_string(std::string_view name)
{
  std::string normalized(name);
  for (auto & ch : normalized) {
    if (ch == '-') {
      ch = '_';
    }
  }
  for (const auto & e : planner_registry()) {
    if (e.name == normalized) {
      return e.kind;
    }
  }
  throw std::invalid_argument("unknown planner: " + std::string(name));
}

std::string_view to_string(PlannerKind kind)
{
  for (const auto & e : planner_registry()) {
    if (e.kind == kind) {
      return e.name;
    }
  }
  return "oracle";
}

namespace
{

class OraclePlanner : public Planner
{
public:
  std::string name() const override { return "oracle"; }
  PlanResponse plan(const PlanContext & ctx) override
  {
    return {plan_oracle(ctx.scenario, ctx.frame_index, ctx.horizon_steps), std::nullopt};
  }
};

class ConstantVelocityPlanner : public Planner
{
public:
  std::string name() const override { return "constant_velocity"; }
  PlanResponse plan(const PlanContext & ctx) override
  {
    return {plan_constant_velocity(ctx.scenario.frames[ctx.frame_index], ctx.horizon_steps),
      std::nullopt};
  }
};

class LaneFollowPlanner : public Planner
{
public:
  std::string name() const override { return "lane_follow"; }
  PlanResponse plan(const PlanContext & ctx) override
  {
    return {plan_lane_follow(ctx.scenario.frames[ctx.frame_index], ctx.scenario.map,
        ctx.horizon_steps), std::nullopt};
  }
};

class OffsetMockPlanner : public Planner
{
public:
  explicit OffsetMockPlanner(Vec2 offset) : offset_(offset) {}
  std::string name() const override { return "mock"; }
  PlanResponse plan(const PlanContext & ctx) override
  {
    Trajectory t = plan_oracle(ctx.scenario, ctx.frame_index, ctx.horizon_steps);
    for (auto & p : t.waypoints) {
      p = p + offset_;
    }
    return {std::move(t), std::nullopt};
  }

private:
  Vec2 offset_;
};

class RemotePlanner : public Planner
{
public:
  explicit RemotePlanner(RemoteOptions options) : client_(std::move(options)) {}
  std::string name() const override { return "remote"; }
  bool needs_image() const override { return true; }
  PlanResponse plan(const PlanContext & ctx) override
  {
    PlanRequest req;
    req.image = ctx.bev_hd;
    req.prompt = build_prompt(ctx.horizon_steps, ctx.grid);
    req.horizon_steps = ctx.horizon_steps;
    req.vocab = ctx.vocab;
    RequestMeta meta;
    meta.scenario = ctx.scenario.name;
    meta.frame = static_cast<std::int64_t>(ctx.frame_index);
    meta.ego_speed = ctx.scenario.frames[ctx.frame_index].ego_speed;
    req.meta = std::move(meta);
    return client_.plan(req);
  }

private:
  RemotePlannerClient client_;
};

}  // namespace

std::unique_ptr<Planner> make_planner(const PlannerConfig & config)
{
  switch (config.kind) {
    case PlannerKind::oracle:
      return std::make_unique<OraclePlanner>();
    case PlannerKind::constant_velocity:
      return std::make_unique<ConstantVelocityPlanner>();
    case PlannerKind::lane_follow:
      return std::make_unique<LaneFollowPlanner>();
    case PlannerKind::mock:
      return std::make_unique<OffsetMockPlanner>(config.mock_offset);
    case PlannerKind::remote:
      return std::make_unique<RemotePlanner>(config.remote);
  }
  throw std::invalid_argument("unhandled planner kind");
}

}  // namespace bevhd
