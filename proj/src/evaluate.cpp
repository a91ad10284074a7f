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

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <filesystem>

#include "bevhd/eval_metrics.hpp"
#include "bevhd/pipeline.hpp"

namespace bevhd
{

namespace
{

struct SampleRef
{
  const Scenario * scenario;
  std::size_t frame;
};

void evaluate_sample(
  Planner & planner, const SampleRef & ref, const EvalConfig & config, SampleResult & out)
{
  const Scenario & sc = *ref.scenario;
  const Frame & frame = sc.frames[ref.frame];
  const bool render = planner.needs_image() || !config.overlay_dir.empty();

  BevLayers layers;
  if (render) {
    BevLayerOptions opts{config.grid, config.style, config.channels,
      config.seed + ref.frame, config.agent_boxes};
    layers = build_bev_layers(frame, sc.map, opts);
  }

  const PlanContext ctx{sc, ref.frame, layers.bev_hd, kHorizonSteps, config.vocab, config.grid};
  const auto started = std::chrono::steady_clock::now();
  PlanResponse resp = planner.plan(ctx);
  if (config.record_latency) {
    out.latency_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  }

  Trajectory pred;
  if (resp.has_tokens()) {
    pred = decode(std::get<WaypointTokens>(resp.payload), config.vocab);
  } else if (config.route_through_codec) {
    const EncodeResult enc = encode(std::get<Trajectory>(resp.payload), config.vocab);
    out.clamped = enc.clamped;
    pred = decode(enc.tokens, config.vocab);
  } else {
    pred = std::get<Trajectory>(std::move(resp.payload));
  }
  if (pred.size() != kHorizonSteps) {
    throw std::runtime_error(
            "planner returned " + std::to_string(pred.size()) + " waypoints, expected " +
            std::to_string(kHorizonSteps));
  }

  const Trajectory gt = ground_truth_trajectory(sc, ref.frame, kHorizonSteps);
  out.errors = l2_per_step(pred, gt);
  out.collisions = collision_flags(config.grid, config.ego_box, pred, sc, ref.frame);

  if (!config.overlay_dir.empty()) {
    char name[64];
    std::snprintf(name, sizeof(name), "_%04zu.ppm", ref.frame);
    const RgbImage overlay = render_trajectories(layers.bev_hd, pred, gt, config.grid, config.style);
    write_ppm(overlay, (std::filesystem::path(config.overlay_dir) / (sc.name + name)).string());
  }
}

}  // namespace

EvalResult evaluate(Planner & planner, std::span<const Scenario> scenarios, const EvalConfig & config)
{
  config.grid.validate();
  config.vocab.validate();
  config.style.validate();
  config.ego_box.validate();
  if (!config.overlay_dir.empty()) {
    std::filesystem::create_directories(config.overlay_dir);
  }

  std::vector<SampleRef> refs;
  for (const auto & sc : scenarios) {
    for (std::size_t i = 0; i + kHorizonSteps < sc.frames.size(); ++i) {
      refs.push_back({&sc, i});
    }
  }

  EvalResult result;
  result.samples.resize(refs.size());
  const int workers = std::max(1, config.workers);
  const bool abort_on_failure = config.failure_policy == FailurePolicy::abort;
  std::atomic<bool> failed{false};

#pragma omp parallel for num_threads(workers) schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(refs.size()); ++i) {
    SampleResult & out = result.samples[i];
    out.scenario = refs[i].scenario->name;
    out.frame = refs[i].frame;
    if (abort_on_failure && failed.load()) {
      out.skipped = true;
      out.error = "not evaluated after an earlier failure";
      continue;
    }
    try {
      evaluate_sample(planner, refs[i], config, out);
    } catch (const std::exception & e) {
      out.skipped = true;
      out.error = e.what();
      failed = true;
    }
  }

  if (abort_on_failure && failed.load()) {
    for (const auto & s : result.samples) {
      if (s.skipped && !s.error.starts_with("not evaluated")) {
        throw EvaluationAborted(
                "sample " + s.scenario + "#" + std::to_string(s.frame) + " failed: " + s.error);
      }
    }
  }
  result.report = aggregate(planner.name(), result.samples);
  return result;
}

}  // namespace bevhd
