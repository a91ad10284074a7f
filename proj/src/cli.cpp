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

#include "bevhd/cli.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <csignal>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "bevhd/config.hpp"
#include "bevhd/eval_metrics.hpp"
#include "bevhd/feature_viz.hpp"
#include "bevhd/hdmap_overlay.hpp"
#include "bevhd/mock_server.hpp"
#include "bevhd/pipeline.hpp"
#include "bevhd/planners.hpp"
#include "bevhd/scenario_gen.hpp"
#include "bevhd/scene.hpp"
#include "bevhd/waypoint_codec.hpp"

namespace bevhd
{

namespace
{

namespace fs = std::filesystem;
using nlohmann::ordered_json;

volatile std::sig_atomic_t g_stop_requested = 0;

/// Operational failure with a message for stderr.
class CliError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

struct CommonOptions
{
  std::string config_path;
  std::string out_dir;
};

void add_common(CLI::App * cmd, CommonOptions & common)
{
  cmd->add_option("--config", common.config_path, "TOML-style config file (default: $BEVHD_CONFIG)");
  cmd->add_option("--out", common.out_dir, "Output directory");
}

Config load_effective_config(const CommonOptions & common)
{
  const auto flag = common.config_path.empty() ? std::nullopt :
    std::optional<std::string>(common.config_path);
  const auto path = resolve_config_path(flag, std::getenv("BEVHD_CONFIG"));
  return path ? load_config(*path) : Config{};
}

/// Creates the output directory; `--out` wins over [eval] output_dir.
fs::path prepare_out_dir(const CommonOptions & common, const Config & cfg, bool required)
{
  const std::string dir = !common.out_dir.empty() ? common.out_dir : cfg.output_dir;
  if (dir.empty()) {
    if (required) {
      throw CliError("no output directory: pass --out DIR or set [eval] output_dir");
    }
    return {};
  }
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw CliError("cannot use output directory '" + dir + "'");
  }
  return dir;
}

void write_file(const fs::path & path, const std::string & bytes)
{
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << bytes;
  out.close();
  if (!out) {
    throw CliError("cannot write " + path.string());
  }
}

Scenario load_valid_scenario(const std::string & path)
{
  Scenario sc = load_scenario(path);
  const auto violations = validate_scenario(sc);
  if (!violations.empty()) {
    const auto & v = violations.front();
    std::string where = v.frame_index ? " (frame " + std::to_string(*v.frame_index) + ")" : "";
    throw CliError(
            path + ": invalid scenario, " + std::to_string(violations.size()) +
            " violation(s); first: " + v.rule + where + ": " + v.detail);
  }
  return sc;
}

/// Expands directories to their *.json files in name order.
std::vector<Scenario> load_scenarios(const std::vector<std::string> & paths)
{
  std::vector<std::string> files;
  for (const auto & p : paths) {
    if (fs::is_directory(p)) {
      std::vector<std::string> found;
      for (const auto & entry : fs::directory_iterator(p)) {
        if (entry.is_regular_file() && entry.path().extension() == ".json") {
          found.push_back(entry.path().string());
        }
      }
      std::sort(found.begin(), found.end());
      files.insert(files.end(), found.begin(), found.end());
    } else {
      files.push_back(p);
    }
  }
  std::vector<Scenario> out;
  for (const auto & f : files) {
    out.push_back(load_valid_scenario(f));
  }
  return out;
}

struct PlannerFlags
{
  std::string kind;
  std::string endpoint;
  std::optional<double> timeout_s;
  std::optional<int> retries;
};

void add_planner_flags(CLI::App * cmd, PlannerFlags & flags)
{
  cmd->add_option("--planner", flags.kind, "oracle | constant_velocity | lane_follow | mock | remote");
  cmd->add_option("--endpoint", flags.endpoint, "Remote planner URL, e.g. http://127.0.0.1:8080");
  cmd->add_option("--timeout", flags.timeout_s, "Remote request timeout in seconds");
  cmd->add_option("--retries", flags.retries, "Remote retries on transport errors");
}

/// Flags override the [planner] section.
PlannerConfig planner_config(const Config & cfg, const PlannerFlags & flags)
{
  PlannerConfig pc = cfg.planner;
  if (!flags.kind.empty()) {
    pc.kind = planner_kind_from_string(flags.kind);
  }
  if (!flags.endpoint.empty()) {
    pc.remote.endpoint = flags.endpoint;
  }
  if (flags.timeout_s) {
    if (!(*flags.timeout_s > 0.0)) {
      throw std::invalid_argument("--timeout must be > 0");
    }
    pc.remote.timeout_s = *flags.timeout_s;
  }
  if (flags.retries) {
    if (*flags.retries < 0) {
      throw std::invalid_argument("--retries must be >= 0");
    }
    pc.remote.retries = *flags.retries;
  }
  if (pc.kind == PlannerKind::remote && pc.remote.endpoint.empty()) {
    throw std::invalid_argument("the remote planner needs --endpoint or [planner] endpoint");
  }
  return pc;
}

Trajectory prediction_of(const PlanResponse & resp, const TokenVocab & vocab)
{
  if (resp.has_tokens()) {
    return decode(std::get<WaypointTokens>(resp.payload), vocab);
  }
  return std::get<Trajectory>(resp.payload);
}

std::size_t checked_frame(const Scenario & sc, long long frame)
{
  if (frame < 0 || static_cast<std::size_t>(frame) >= sc.frames.size()) {
    throw CliError(
            "frame " + std::to_string(frame) + " out of range; scenario '" + sc.name + "' has " +
            std::to_string(sc.frames.size()) + " frames");
  }
  return static_cast<std::size_t>(frame);
}

void write_image(const RgbImage & img, const fs::path & dir, const std::string & stem, bool png)
{
  write_ppm(img, (dir / (stem + ".ppm")).string());
  if (png) {
    write_png(img, (dir / (stem + ".png")).string());
  }
}

std::string point_text(Vec2 p)
{
  return "(" + format_double(p.x) + ", " + format_double(p.y) + ")";
}

// ---------------------------------------------------------------------------

struct GenArgs
{
  CommonOptions common;
  std::optional<long long> seed;
  std::string kind;
  std::optional<double> duration;
  std::optional<double> speed;
  std::optional<double> radius;
  std::optional<double> gap;
};

int cmd_gen(const GenArgs & a, std::ostream & out)
{
  const Config cfg = load_effective_config(a.common);
  const fs::path dir = prepare_out_dir(a.common, cfg, true);
  if (a.seed && *a.seed < 0) {
    throw std::invalid_argument("--seed must be >= 0");
  }
  const std::uint64_t seed = a.seed ? static_cast<std::uint64_t>(*a.seed) : cfg.seed;

  std::vector<Scenario> scenarios;
  if (a.kind.empty()) {
    scenarios = standard_suite(seed);
  } else {
    GenSpec spec;
    spec.kind = maneuver_from_string(a.kind);
    spec.seed = seed;
    spec.duration = a.duration.value_or(spec.duration);
    spec.ego_speed = a.speed.value_or(spec.ego_speed);
    spec.turn_radius = a.radius.value_or(spec.turn_radius);
    spec.lead_gap = a.gap.value_or(spec.lead_gap);
    scenarios.push_back(generate(spec));
  }
  for (const auto & sc : scenarios) {
    const fs::path path = dir / (sc.name + ".json");
    write_file(path, scenario_to_json(sc));
    out << path.string() << "\n";
  }
  return 0;
}

struct RenderArgs
{
  CommonOptions common;
  PlannerFlags planner;
  std::string scenario;
  long long frame{0};
  std::string features;
  bool traj{false};
  bool boxes{false};
  bool png{false};
};

int cmd_render(const RenderArgs & a, std::ostream & out)
{
  const Config cfg = load_effective_config(a.common);
  const Scenario sc = load_valid_scenario(a.scenario);
  const std::size_t frame = checked_frame(sc, a.frame);
  const fs::path dir = prepare_out_dir(a.common, cfg, true);

  std::optional<FeatureMap> features;
  if (!a.features.empty()) {
    features = read_bft(a.features);
    if (features->height != cfg.grid.height_cells || features->width != cfg.grid.width_cells) {
      throw CliError("feature map size does not match the configured grid");
    }
  }
  const BevLayerOptions opts{cfg.grid, cfg.style, cfg.channels, cfg.seed + frame,
    a.boxes || cfg.agent_boxes};
  const BevLayers layers = build_bev_layers(sc.frames[frame], sc.map, opts, std::move(features));
  write_image(layers.bev, dir, "bev", a.png);
  write_image(layers.bev_hd, dir, "bev_hd", a.png);
  out << (dir / "bev.ppm").string() << "\n" << (dir / "bev_hd.ppm").string() << "\n";

  if (a.traj) {
    if (frame + kHorizonSteps >= sc.frames.size()) {
      throw CliError("frame " + std::to_string(frame) + " has no full 3 s future for --traj");
    }
    auto planner = make_planner(planner_config(cfg, a.planner));
    const PlanContext ctx{sc, frame, layers.bev_hd, kHorizonSteps, cfg.vocab, cfg.grid};
    const Trajectory pred = prediction_of(planner->plan(ctx), cfg.vocab);
    const Trajectory gt = ground_truth_trajectory(sc, frame, kHorizonSteps);
    const RgbImage overlay = render_trajectories(layers.bev_hd, pred, gt, cfg.grid, cfg.style);
    write_image(overlay, dir, "overlay", a.png);
    out << (dir / "overlay.ppm").string() << "\n";
  }
  return 0;
}

struct PlanArgs
{
  CommonOptions common;
  PlannerFlags planner;
  std::string scenario;
  long long frame{0};
};

int cmd_plan(const PlanArgs & a, std::ostream & out)
{
  const Config cfg = load_effective_config(a.common);
  const Scenario sc = load_valid_scenario(a.scenario);
  const std::size_t frame = checked_frame(sc, a.frame);
  const fs::path dir = prepare_out_dir(a.common, cfg, true);
  auto planner = make_planner(planner_config(cfg, a.planner));

  BevLayers layers;
  if (planner->needs_image()) {
    const BevLayerOptions opts{cfg.grid, cfg.style, cfg.channels, cfg.seed + frame,
      cfg.agent_boxes};
    layers = build_bev_layers(sc.frames[frame], sc.map, opts);
  }
  const PlanContext ctx{sc, frame, layers.bev_hd, kHorizonSteps, cfg.vocab, cfg.grid};
  const PlanResponse resp = planner->plan(ctx);
  const Trajectory pred = prediction_of(resp, cfg.vocab);
  const EncodeResult enc = resp.has_tokens() ?
    EncodeResult{std::get<WaypointTokens>(resp.payload), false, 0} : encode(pred, cfg.vocab);

  ordered_json j;
  j["planner"] = planner->name();
  j["scenario"] = sc.name;
  j["frame"] = frame;
  j["tokens"] = enc.tokens.tokens;
  ordered_json wps = ordered_json::array();
  for (const auto & p : pred.waypoints) {
    wps.push_back(ordered_json::array({p.x, p.y}));
  }
  j["waypoints"] = std::move(wps);
  j["clamped"] = enc.clamped;
  write_file(dir / "plan.json", j.dump(2) + "\n");
  write_file(dir / "prompt.txt", build_prompt(kHorizonSteps, cfg.grid) + "\n");

  for (std::size_t i = 0; i < pred.size(); ++i) {
    out << "t+" << format_double(kStepSeconds * static_cast<double>(i + 1)) << "s  token "
        << enc.tokens.tokens[i] << "  " << point_text(pred.waypoints[i]) << "\n";
  }
  return 0;
}

struct EvalArgs
{
  CommonOptions common;
  PlannerFlags planner;
  std::vector<std::string> scenarios;
  bool suite{false};
  std::optional<int> workers;
  std::string failure_policy;
  bool codec{false};
  std::optional<bool> latency;
  bool overlays{false};
};

int cmd_eval(const EvalArgs & a, std::ostream & out, std::ostream & err)
{
  const Config cfg = load_effective_config(a.common);
  const fs::path dir = prepare_out_dir(a.common, cfg, true);
  const PlannerConfig pc = planner_config(cfg, a.planner);

  std::vector<Scenario> scenarios = load_scenarios(a.scenarios);
  if (a.suite) {
    auto suite = standard_suite(cfg.seed);
    scenarios.insert(scenarios.end(), suite.begin(), suite.end());
  }
  if (scenarios.empty()) {
    throw CliError("no scenarios: pass --scenarios PATH... or --suite");
  }

  Config effective = cfg;
  effective.planner = pc;
  EvalConfig ec = make_eval_config(effective);
  if (a.workers) {
    if (*a.workers < 1) {
      throw std::invalid_argument("--workers must be >= 1");
    }
    ec.workers = *a.workers;
  }
  if (!a.failure_policy.empty()) {
    ec.failure_policy = failure_policy_from_string(a.failure_policy);
  }
  ec.route_through_codec = ec.route_through_codec || a.codec;
  if (a.latency) {
    ec.record_latency = *a.latency;
  }
  if (a.overlays) {
    ec.overlay_dir = (dir / "overlays").string();
  }

  auto planner = make_planner(pc);
  const EvalResult result = evaluate(*planner, scenarios, ec);
  write_file(dir / "report.json", report_to_json(result.report));
  write_file(dir / "report.txt", report_to_table(result.report));
  write_file(dir / "samples.csv", samples_to_csv(result.samples));
  out << report_to_table(result.report);
  for (const auto & s : result.samples) {
    if (s.skipped) {
      err << "skipped " << s.scenario << " frame " << s.frame << ": " << s.error << "\n";
    }
  }
  return 0;
}

struct TokenizeArgs
{
  CommonOptions common;
  std::vector<std::string> points;
};

Vec2 parse_point(const std::string & text)
{
  const auto comma = text.find(',');
  if (comma == std::string::npos) {
    throw std::invalid_argument("expected x,y but got '" + text + "'");
  }
  auto number = [&](const std::string & s) {
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(s, &used);
      } catch (const std::exception &) {
        used = 0;
      }
      if (used == 0 || used != s.size() || !std::isfinite(v)) {
        throw std::invalid_argument("bad coordinate in '" + text + "'");
      }
      return v;
    };
  return {number(text.substr(0, comma)), number(text.substr(comma + 1))};
}

int cmd_tokenize(const TokenizeArgs & a, std::ostream & out, std::ostream & err)
{
  const Config cfg = load_effective_config(a.common);
  const fs::path dir = prepare_out_dir(a.common, cfg, false);
  if (a.points.empty()) {
    throw std::invalid_argument("no waypoints given; usage: tokenize x,y [x,y ...]");
  }
  ordered_json rows = ordered_json::array();
  for (const auto & text : a.points) {
    const Vec2 p = parse_point(text);
    bool clamped = false;
    const std::int64_t token = encode_point(p, cfg.vocab, &clamped);
    const Vec2 q = decode_token(token, cfg.vocab);
    const Vec2 error{std::abs(q.x - p.x), std::abs(q.y - p.y)};
    if (clamped) {
      err << "warning: " << point_text(p) << " lies outside +-" << format_double(cfg.vocab.range)
          << " m and was clamped\n";
    }
    out << point_text(p) << " -> token " << token << " -> " << point_text(q) << " error "
        << point_text(error) << "\n";
    ordered_json row;
    row["input"] = ordered_json::array({p.x, p.y});
    row["token"] = token;
    row["decoded"] = ordered_json::array({q.x, q.y});
    row["error"] = ordered_json::array({error.x, error.y});
    row["clamped"] = clamped;
    rows.push_back(std::move(row));
  }
  if (!dir.empty()) {
    write_file(dir / "tokens.json", rows.dump(2) + "\n");
  }
  return 0;
}

struct ServeArgs
{
  CommonOptions common;
  std::string policy;
  std::string tokens;
  std::vector<std::string> scenarios;
  std::string host;
  std::optional<int> port;
  std::optional<int> delay_ms;
};

std::vector<std::int64_t> parse_tokens(const std::string & text)
{
  std::vector<std::int64_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    long long v = 0;
    try {
      v = std::stoll(item, &used);
    } catch (const std::exception &) {
      used = 0;
    }
    if (used == 0 || used != item.size()) {
      throw std::invalid_argument("bad token '" + item + "'");
    }
    out.push_back(v);
  }
  return out;
}

int cmd_serve_mock(const ServeArgs & a, std::ostream & out)
{
  const Config cfg = load_effective_config(a.common);
  const fs::path dir = prepare_out_dir(a.common, cfg, false);

  MockServerOptions opts;
  opts.policy = a.policy.empty() ? cfg.serve.policy : mock_policy_from_string(a.policy);
  opts.fixed_tokens = a.tokens.empty() ? cfg.serve.tokens : parse_tokens(a.tokens);
  for (const auto & t : opts.fixed_tokens) {
    if (t < 0 || t >= cfg.vocab.vocab_size()) {
      throw std::invalid_argument("token " + std::to_string(t) + " outside the vocabulary");
    }
  }
  if (opts.policy == MockPolicy::fixed_tokens && opts.fixed_tokens.size() != kHorizonSteps) {
    throw std::invalid_argument(
            "the fixed_tokens policy needs exactly " + std::to_string(kHorizonSteps) + " tokens");
  }
  for (auto & sc : load_scenarios(a.scenarios)) {
    std::string name = sc.name;
    opts.scenarios.emplace(std::move(name), std::move(sc));
  }
  opts.delay = std::chrono::milliseconds(a.delay_ms.value_or(cfg.serve.delay_ms));
  if (opts.delay.count() < 0) {
    throw std::invalid_argument("--delay-ms must be >= 0");
  }

  const std::string host = a.host.empty() ? cfg.serve.host : a.host;
  const int port = a.port.value_or(cfg.serve.port);
  if (port < 0 || port > 65535) {
    throw std::invalid_argument("--port must be in [0, 65535]");
  }

  MockServer server(std::move(opts));
  try {
    server.start(host, port);
  } catch (const std::exception & e) {
    throw CliError(e.what());
  }
  out << "listening on " << server.url() << std::endl;
  if (!dir.empty()) {
    write_file(dir / "address.txt", server.url() + "\n");
  }
  while (g_stop_requested == 0 && server.running()) {
    std::this_thread::sleep_for(std::chrono::milliseconds(50));
  }
  const bool crashed = g_stop_requested == 0;
  server.stop();
  if (crashed) {
    throw CliError("server stopped unexpectedly");
  }
  out << "stopped" << std::endl;
  return 0;
}

}  // namespace

void request_cli_stop()
{
  g_stop_requested = 1;
}

int run_cli(const std::vector<std::string> & args, std::ostream & out, std::ostream & err)
{
  CLI::App app{"bevhd: BEV-HD Map planning pipeline tools", "bevhd"};
  app.require_subcommand(1);
  app.footer(
    "Configuration precedence: command-line flags, then the file given by --config,\n"
    "then the file named by BEVHD_CONFIG, then built-in defaults.");

  GenArgs gen;
  auto * gen_cmd = app.add_subcommand("gen", "Generate scenario JSON files");
  add_common(gen_cmd, gen.common);
  gen_cmd->add_option("--seed", gen.seed, "Generator seed (default: [eval] seed)");
  gen_cmd->add_option("--kind", gen.kind, "Single maneuver instead of the standard suite");
  gen_cmd->add_option("--duration", gen.duration, "Seconds (with --kind)");
  gen_cmd->add_option("--speed", gen.speed, "Ego speed in m/s (with --kind)");
  gen_cmd->add_option("--radius", gen.radius, "Turn radius in m (with --kind)");
  gen_cmd->add_option("--gap", gen.gap, "Lead gap in m (with --kind)");

  RenderArgs render;
  auto * render_cmd = app.add_subcommand("render", "Render BEV, BEV-HD Map and trajectory overlay");
  add_common(render_cmd, render.common);
  add_planner_flags(render_cmd, render.planner);
  render_cmd->add_option("--scenario", render.scenario, "Scenario JSON")->required();
  render_cmd->add_option("--frame", render.frame, "Frame index")->required();
  render_cmd->add_option("--features", render.features, "BEV feature tensor (.bft)");
  render_cmd->add_flag("--traj", render.traj, "Also write the predicted/GT overlay");
  render_cmd->add_flag("--boxes", render.boxes, "Draw agent rectangles on the map layer");
  render_cmd->add_flag("--png", render.png, "Also write PNG copies");

  PlanArgs plan;
  auto * plan_cmd = app.add_subcommand("plan", "Plan one frame");
  add_common(plan_cmd, plan.common);
  add_planner_flags(plan_cmd, plan.planner);
  plan_cmd->add_option("--scenario", plan.scenario, "Scenario JSON")->required();
  plan_cmd->add_option("--frame", plan.frame, "Frame index")->required();

  EvalArgs eval;
  auto * eval_cmd = app.add_subcommand("eval", "Open-loop evaluation");
  add_common(eval_cmd, eval.common);
  add_planner_flags(eval_cmd, eval.planner);
  eval_cmd->add_option("--scenarios", eval.scenarios, "Scenario files or directories");
  eval_cmd->add_flag("--suite", eval.suite, "Add the in-memory standard suite");
  eval_cmd->add_option("--workers", eval.workers, "Concurrent samples");
  eval_cmd->add_option("--failure-policy", eval.failure_policy, "abort | skip");
  eval_cmd->add_flag("--codec", eval.codec, "Route waypoint answers through the token codec");
  eval_cmd->add_flag("--latency,!--no-latency", eval.latency, "Record planner latency");
  eval_cmd->add_flag("--overlays", eval.overlays, "Write one overlay image per sample");

  TokenizeArgs tok;
  auto * tok_cmd = app.add_subcommand("tokenize", "Encode and decode waypoints");
  add_common(tok_cmd, tok.common);
  tok_cmd->add_option("points", tok.points, "Waypoints as x,y");

  ServeArgs serve;
  auto * serve_cmd = app.add_subcommand("serve-mock", "Run the mock planner server");
  add_common(serve_cmd, serve.common);
  serve_cmd->add_option("--policy", serve.policy, "fixed_tokens | echo_oracle | constant_velocity");
  serve_cmd->add_option("--tokens", serve.tokens, "Comma-separated tokens for fixed_tokens");
  serve_cmd->add_option("--scenarios", serve.scenarios, "Scenarios for echo_oracle");
  serve_cmd->add_option("--host", serve.host, "Bind address (default 127.0.0.1)");
  serve_cmd->add_option("--port", serve.port, "Port, 0 for any free port (default 8080)");
  serve_cmd->add_option("--delay-ms", serve.delay_ms, "Delay before each reply");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError & e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (gen_cmd->parsed()) {
      return cmd_gen(gen, out);
    }
    if (render_cmd->parsed()) {
      return cmd_render(render, out);
    }
    if (plan_cmd->parsed()) {
      return cmd_plan(plan, out);
    }
    if (eval_cmd->parsed()) {
      return cmd_eval(eval, out, err);
    }
    if (tok_cmd->parsed()) {
      return cmd_tokenize(tok, out, err);
    }
    if (serve_cmd->parsed()) {
      g_stop_requested = 0;
      return cmd_serve_mock(serve, out);
    }
  } catch (const std::invalid_argument & e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception & e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace bevhd
