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

#include <fstream>
#include <sstream>

#include "bevhd/scene.hpp"
#include "json_util.hpp"

namespace bevhd
{

using json_util::ordered_json;

namespace
{

ordered_json pose_to_json(const Pose2 & p)
{
  ordered_json j;
  j["x"] = p.x;
  j["y"] = p.y;
  j["yaw"] = p.yaw;
  return j;
}

Pose2 pose_from_json(const ordered_json & j, const std::string & where)
{
  json_util::reject_unknown_keys(j, {"x", "y", "yaw"}, where);
  return {json_util::finite_number(j, "x", where), json_util::finite_number(j, "y", where),
    json_util::finite_number(j, "yaw", where)};
}

void check_finite_for_output(double v, const char * what)
{
  if (!std::isfinite(v)) {
    throw FormatError(std::string("cannot serialize non-finite ") + what);
  }
}

}  // namespace

std::string scenario_to_json(const Scenario & s)
{
  ordered_json root;
  root["name"] = s.name;
  ordered_json frames = ordered_json::array();
  for (const auto & f : s.frames) {
    check_finite_for_output(f.t, "frame time");
    check_finite_for_output(f.ego.x + f.ego.y + f.ego.yaw + f.ego_speed, "ego state");
    ordered_json jf;
    jf["t"] = f.t;
    jf["ego"] = pose_to_json(f.ego);
    jf["ego_speed"] = f.ego_speed;
    ordered_json agents = ordered_json::array();
    for (const auto & a : f.agents) {
      check_finite_for_output(
        a.pose.x + a.pose.y + a.pose.yaw + a.length + a.width + a.speed, "agent state");
      ordered_json ja;
      ja["id"] = a.id;
      ja["pose"] = pose_to_json(a.pose);
      ja["length"] = a.length;
      ja["width"] = a.width;
      ja["speed"] = a.speed;
      agents.push_back(std::move(ja));
    }
    jf["agents"] = std::move(agents);
    frames.push_back(std::move(jf));
  }
  root["frames"] = std::move(frames);
  ordered_json polylines = ordered_json::array();
  for (const auto & pl : s.map.polylines) {
    ordered_json jp;
    jp["kind"] = std::string(to_string(pl.kind));
    ordered_json pts = ordered_json::array();
    for (const auto & p : pl.points) {
      check_finite_for_output(p.x + p.y, "map point");
      pts.push_back(json_util::point_to_json(p));
    }
    jp["points"] = std::move(pts);
    polylines.push_back(std::move(jp));
  }
  root["map"]["polylines"] = std::move(polylines);
  return root.dump(1) + "\n";
}

Scenario scenario_from_json(std::string_view text)
{
  const ordered_json root = json_util::parse(text, "scenario");
  json_util::reject_unknown_keys(root, {"name", "frames", "map"}, "scenario");

  Scenario s;
  s.name = json_util::string_field(root, "name", "scenario");
  const auto & frames = json_util::array_field(root, "frames", "scenario");
  for (std::size_t i = 0; i < frames.size(); ++i) {
    const std::string where = "frames[" + std::to_string(i) + "]";
    const auto & jf = frames[i];
    json_util::reject_unknown_keys(jf, {"t", "ego", "ego_speed", "agents"}, where);
    Frame f;
    f.t = json_util::finite_number(jf, "t", where);
    f.ego = pose_from_json(json_util::field(jf, "ego", where), where + ".ego");
    f.ego_speed = json_util::finite_number(jf, "ego_speed", where);
    const auto & agents = json_util::array_field(jf, "agents", where);
    for (std::size_t k = 0; k < agents.size(); ++k) {
      const std::string aw = where + ".agents[" + std::to_string(k) + "]";
      const auto & ja = agents[k];
      json_util::reject_unknown_keys(ja, {"id", "pose", "length", "width", "speed"}, aw);
      AgentState a;
      a.id = json_util::string_field(ja, "id", aw);
      a.pose = pose_from_json(json_util::field(ja, "pose", aw), aw + ".pose");
      a.length = json_util::finite_number(ja, "length", aw);
      a.width = json_util::finite_number(ja, "width", aw);
      a.speed = json_util::finite_number(ja, "speed", aw);
      f.agents.push_back(std::move(a));
    }
    s.frames.push_back(std::move(f));
  }

  const auto & jm = json_util::field(root, "map", "scenario");
  json_util::reject_unknown_keys(jm, {"polylines"}, "map");
  const auto & polylines = json_util::array_field(jm, "polylines", "map");
  for (std::size_t k = 0; k < polylines.size(); ++k) {
    const std::string where = "map.polylines[" + std::to_string(k) + "]";
    const auto & jp = polylines[k];
    json_util::reject_unknown_keys(jp, {"kind", "points"}, where);
    Polyline pl;
    try {
      pl.kind = polyline_kind_from_string(json_util::string_field(jp, "kind", where));
    } catch (const std::invalid_argument & e) {
      throw FormatError(where + ": " + e.what());
    }
    const auto & pts = json_util::array_field(jp, "points", where);
    for (std::size_t n = 0; n < pts.size(); ++n) {
      pl.points.push_back(
        json_util::point_from_json(pts[n], where + ".points[" + std::to_string(n) + "]"));
    }
    s.map.polylines.push_back(std::move(pl));
  }
  return s;
}

Scenario load_scenario(const std::string & path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("cannot open scenario file: " + path);
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return scenario_from_json(ss.str());
}

void save_scenario(const Scenario & s, const std::string & path)
{
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot write scenario file: " + path);
  }
  out << scenario_to_json(s);
  if (!out) {
    throw std::runtime_error("write failed: " + path);
  }
}

}  // namespace bevhd
