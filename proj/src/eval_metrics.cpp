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

#include "bevhd/eval_metrics.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <sstream>

#include <json.hpp>

namespace bevhd
{

StepErrors l2_per_step(const Trajectory & pred, const Trajectory & gt)
{
  if (pred.size() != gt.size()) {
    throw std::invalid_argument(
            "l2: prediction has " + std::to_string(pred.size()) + " waypoints, ground truth " +
            std::to_string(gt.size()));
  }
  StepErrors out;
  out.e.reserve(pred.size());
  for (std::size_t k = 0; k < pred.size(); ++k) {
    out.e.push_back(norm(pred.waypoints[k] - gt.waypoints[k]));
  }
  return out;
}

namespace
{

void require_steps(const StepErrors & e, Horizon h)
{
  if (e.e.size() < steps_of(h)) {
    throw std::invalid_argument("step errors shorter than the requested horizon");
  }
}

}  // namespace

double l2_stp3(const StepErrors & e, Horizon h)
{
  require_steps(e, h);
  const std::size_t n = steps_of(h);
  double sum = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    sum += e.e[k];
  }
  return sum / static_cast<double>(n);
}

double l2_uniad(const StepErrors & e, Horizon h)
{
  require_steps(e, h);
  return e.e[steps_of(h) - 1];
}

void EgoBoxSpec::validate() const
{
  if (!(length > 0.0) || !(width > 0.0)) {
    throw std::invalid_argument("ego box dimensions must be positive");
  }
}

std::vector<double> reconstruct_headings(const Trajectory & traj)
{
  std::vector<double> headings;
  headings.reserve(traj.size());
  double heading = 0.0;
  Vec2 prev{0.0, 0.0};
  for (const auto & p : traj.waypoints) {
    const Vec2 d = p - prev;
    if (norm(d) > 1e-9) {
      heading = std::atan2(d.y, d.x);
    }
    headings.push_back(heading);
    prev = p;
  }
  return headings;
}

bool collision_at_step(
  const GridSpec & spec, const EgoBoxSpec & ego_box, Vec2 waypoint, double heading,
  const Pose2 & reference_ego, std::span<const AgentState> future_agents)
{
  if (future_agents.empty()) {
    return false;
  }
  const OccupancyMap agents = rasterize_agents(spec, reference_ego, future_agents);
  OccupancyMap ego(spec);
  const OrientedBox box{waypoint, heading, ego_box.length, ego_box.width};
  fill_boxes(ego, spec, std::span<const OrientedBox>(&box, 1));
  return ego.intersects(agents);
}

std::vector<bool> collision_flags(
  const GridSpec & spec, const EgoBoxSpec & ego_box, const Trajectory & pred,
  const Scenario & scenario, std::size_t frame_index)
{
  if (frame_index + pred.size() >= scenario.frames.size()) {
    throw HorizonOutOfRange(
            "collision check needs " + std::to_string(pred.size()) + " future frames after frame " +
            std::to_string(frame_index) + " of '" + scenario.name + "'");
  }
  const Pose2 & ref = scenario.frames[frame_index].ego;
  const std::vector<double> headings = reconstruct_headings(pred);
  std::vector<bool> flags(pred.size(), false);
  for (std::size_t k = 0; k < pred.size(); ++k) {
    flags[k] = collision_at_step(
      spec, ego_box, pred.waypoints[k], headings[k], ref,
      scenario.frames[frame_index + k + 1].agents);
  }
  return flags;
}

double collision_rate(std::span<const std::vector<bool>> per_sample_flags, Horizon h)
{
  if (per_sample_flags.empty()) {
    return 0.0;
  }
  const std::size_t steps = steps_of(h);
  double sum_rates = 0.0;
  for (std::size_t t = 0; t < steps; ++t) {
    std::size_t hits = 0;
    for (const auto & flags : per_sample_flags) {
      if (flags.size() < steps) {
        throw std::invalid_argument("collision flags shorter than the requested horizon");
      }
      hits += flags[t] ? 1 : 0;
    }
    sum_rates += static_cast<double>(hits) / static_cast<double>(per_sample_flags.size());
  }
  return sum_rates / static_cast<double>(steps);
}

double collision_rate(
  std::span<const CollisionCase> cases, Horizon h, const GridSpec & spec,
  const EgoBoxSpec & ego_box)
{
  std::vector<std::vector<bool>> flags;
  flags.reserve(cases.size());
  for (const auto & c : cases) {
    flags.push_back(collision_flags(spec, ego_box, *c.prediction, *c.scenario, c.frame_index));
  }
  return collision_rate(flags, h);
}

HorizonTriple HorizonTriple::from(double s1, double s2, double s3)
{
  return {{s1, s2, s3}, (s1 + s2 + s3) / 3.0};
}

MetricsReport aggregate(const std::string & planner, std::span<const SampleResult> samples)
{
  MetricsReport r;
  r.planner = planner;
  std::array<double, 3> avg_sum{};
  std::array<double, 3> max_sum{};
  std::vector<std::vector<bool>> flags;
  double latency_sum = 0.0;
  for (const auto & s : samples) {
    if (s.skipped) {
      ++r.skipped;
      continue;
    }
    ++r.samples;
    r.clamped += s.clamped ? 1 : 0;
    latency_sum += s.latency_s;
    for (std::size_t i = 0; i < 3; ++i) {
      avg_sum[i] += l2_stp3(s.errors, kHorizons[i]);
      max_sum[i] += l2_uniad(s.errors, kHorizons[i]);
    }
    flags.push_back(s.collisions);
  }
  if (r.samples == 0) {
    return r;
  }
  const double n = static_cast<double>(r.samples);
  r.l2_avg = HorizonTriple::from(avg_sum[0] / n, avg_sum[1] / n, avg_sum[2] / n);
  r.l2_max = HorizonTriple::from(max_sum[0] / n, max_sum[1] / n, max_sum[2] / n);
  r.collision_rate = HorizonTriple::from(
    collision_rate(flags, Horizon::s1), collision_rate(flags, Horizon::s2),
    collision_rate(flags, Horizon::s3));
  r.mean_latency_s = latency_sum / n;
  return r;
}

std::string format_double(double v)
{
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

namespace
{

nlohmann::ordered_json triple_json(const HorizonTriple & t)
{
  nlohmann::ordered_json j;
  j["1s"] = t.at[0];
  j["2s"] = t.at[1];
  j["3s"] = t.at[2];
  j["avg"] = t.avg;
  return j;
}

std::string cells(const HorizonTriple & t, double scale, int decimals)
{
  std::string out;
  char buf[32];
  for (double v : {t.at[0], t.at[1], t.at[2], t.avg}) {
    std::snprintf(buf, sizeof(buf), " %7.*f", decimals, v * scale);
    out += buf;
  }
  return out;
}

}  // namespace

std::string report_to_json(const MetricsReport & report)
{
  nlohmann::ordered_json j;
  j["planner"] = report.planner;
  j["samples"] = report.samples;
  j["skipped"] = report.skipped;
  j["clamped"] = report.clamped;
  j["mean_latency_s"] = report.mean_latency_s;
  j["l2_avg_m"] = triple_json(report.l2_avg);
  j["l2_max_m"] = triple_json(report.l2_max);
  j["collision_rate"] = triple_json(report.collision_rate);
  return j.dump(2) + "\n";
}

std::string report_to_table(const MetricsReport & report)
{
  std::ostringstream os;
  os << "planner: " << report.planner << "  samples: " << report.samples
     << "  skipped: " << report.skipped << "  clamped: " << report.clamped
     << "  mean latency (s): " << format_double(report.mean_latency_s) << "\n";
  const std::string group = "      1s      2s      3s    Avg.";
  const std::size_t width = std::max<std::size_t>(12, report.planner.size());
  const std::string pad(width, ' ');
  os << pad << " |           L2_avg (m)           |           L2_max (m)           "
        "|       Collision rate (%)\n";
  os << pad << " |" << group << " |" << group << " |" << group << "\n";
  os << std::string(width + 1, '-') << "+--------------------------------"
        "+--------------------------------+--------------------------------\n";
  os << report.planner << std::string(width - report.planner.size(), ' ') << " |"
     << cells(report.l2_avg, 1.0, 4) << " |" << cells(report.l2_max, 1.0, 4) << " |"
     << cells(report.collision_rate, 100.0, 2) << "\n";
  return os.str();
}

std::string samples_to_csv(std::span<const SampleResult> samples)
{
  std::string out = "scenario,frame";
  for (std::size_t k = 1; k <= kHorizonSteps; ++k) {
    out += ",e" + std::to_string(k);
  }
  for (std::size_t k = 1; k <= kHorizonSteps; ++k) {
    out += ",collision" + std::to_string(k);
  }
  out += ",latency_s,clamped\n";
  for (const auto & s : samples) {
    if (s.skipped) {
      continue;
    }
    out += s.scenario + "," + std::to_string(s.frame);
    for (double e : s.errors.e) {
      out += "," + format_double(e);
    }
    for (bool c : s.collisions) {
      out += c ? ",1" : ",0";
    }
    out += "," + format_double(s.latency_s) + (s.clamped ? ",1" : ",0") + "\n";
  }
  return out;
}

}  // namespace bevhd
