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

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "bevhd/cli.hpp"
#include "bevhd/config.hpp"
#include "bevhd/feature_viz.hpp"
#include "test_util.hpp"

namespace fs = std::filesystem;

namespace bevhd
{
namespace
{

struct CliRun
{
  int code{0};
  std::string out;
  std::string err;
};

CliRun run(std::vector<std::string> args)
{
  std::ostringstream out;
  std::ostringstream err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

void write_text(const fs::path & p, const std::string & text)
{
  std::ofstream f(p);
  f << text;
}

TEST(Config, DefaultsWhenEmpty)
{
  const Config c = parse_config("# nothing here\n");
  EXPECT_EQ(c.grid, default_grid());
  EXPECT_EQ(c.vocab.bins_per_axis, 400);
  EXPECT_EQ(c.planner.kind, PlannerKind::oracle);
  EXPECT_EQ(c.workers, 1);
  EXPECT_FALSE(c.record_latency.has_value());
  EXPECT_FALSE(make_eval_config(c).record_latency);
}

TEST(Config, ParsesEverySection)
{
  const Config c = parse_config(R"(
[grid]
height_cells = 90
width_cells = 90
extent = 25.0

[vocab]
bins_per_axis = 200
range = 25

[style]
centerline = [1, 2, 3]
thickness = 2

[planner]
kind = "remote"
endpoint = "http://127.0.0.1:9000"  # trailing comment
timeout_s = 2.5
retries = 0
mock_offset = [0.5, -0.5]

[eval]
ego_length = 4.5
failure_policy = "skip"
workers = 3
channels = 16
seed = 7
route_through_codec = true
agent_boxes = true

[serve]
policy = "echo_oracle"
port = 0
delay_ms = 5
)");
  EXPECT_EQ(c.grid.height_cells, 90);
  EXPECT_EQ(c.grid.extent, 25.0);
  EXPECT_EQ(c.vocab.bins_per_axis, 200);
  EXPECT_EQ(c.style.color_of(PolylineKind::centerline), (Rgb{1, 2, 3}));
  EXPECT_EQ(c.style.thickness, 2);
  EXPECT_EQ(c.planner.kind, PlannerKind::remote);
  EXPECT_EQ(c.planner.remote.endpoint, "http://127.0.0.1:9000");
  EXPECT_EQ(c.planner.remote.timeout_s, 2.5);
  EXPECT_EQ(c.planner.remote.retries, 0);
  EXPECT_EQ(c.planner.mock_offset, (Vec2{0.5, -0.5}));
  EXPECT_EQ(c.ego_box.length, 4.5);
  EXPECT_EQ(c.failure_policy, FailurePolicy::skip);
  EXPECT_EQ(c.workers, 3);
  EXPECT_EQ(c.channels, 16);
  EXPECT_EQ(c.seed, 7u);
  EXPECT_TRUE(c.route_through_codec);
  EXPECT_TRUE(c.agent_boxes);
  EXPECT_EQ(c.serve.policy, MockPolicy::echo_oracle);
  EXPECT_EQ(c.serve.port, 0);
  const EvalConfig e = make_eval_config(c);
  EXPECT_TRUE(e.record_latency);
  EXPECT_EQ(e.workers, 3);
  EXPECT_EQ(e.failure_policy, FailurePolicy::skip);
}

TEST(Config, RejectsBadDocuments)
{
  auto rejects = [](const std::string & text, const std::string & needle) {
      try {
        parse_config(text, "cfg");
        ADD_FAILURE() << "accepted: " << text;
      } catch (const ConfigError & e) {
        EXPECT_NE(std::string(e.what()).find(needle), std::string::npos) << e.what();
      }
    };
  rejects("[nope]\n", "cfg:1");
  rejects("[grid]\nextent = 1\n[grid]\n", "cfg:3");
  rejects("[grid]\nextent = 1\nextent = 2\n", "cfg:3");
  rejects("[grid]\ncolour = 1\n", "colour");
  rejects("[grid]\nextent = \"wide\"\n", "cfg:2");
  rejects("[eval]\nworkers = 1.5\n", "cfg:2");
  rejects("[grid]\nextent = -1\n", "extent");
  rejects("[planner]\nkind = \"vlm\"\n", "vlm");
  rejects("[eval]\nfailure_policy = \"retry\"\n", "retry");
  rejects("workers 3\n", "cfg:1");
  rejects("[grid]\nheight_cells = 100\n", "square");
}

TEST(Config, PathResolutionPrefersFlag)
{
  EXPECT_EQ(resolve_config_path(std::string("a.toml"), "b.toml"), "a.toml");
  EXPECT_EQ(resolve_config_path(std::nullopt, "b.toml"), "b.toml");
  EXPECT_EQ(resolve_config_path(std::nullopt, ""), std::nullopt);
  EXPECT_EQ(resolve_config_path(std::nullopt, nullptr), std::nullopt);
  EXPECT_THROW(load_config("/nonexistent/bevhd.toml"), ConfigError);
}

TEST(Cli, UsageErrors)
{
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  EXPECT_EQ(run({"render", "--frame", "1"}).code, 2);
  EXPECT_EQ(run({"tokenize", "1;2"}).code, 2);
  const CliRun help = run({"--help"});
  EXPECT_EQ(help.code, 0);
  EXPECT_NE(help.out.find("BEVHD_CONFIG"), std::string::npos);
}

TEST(Cli, GenWritesSuiteDeterministically)
{
  const fs::path a = test_util::temp_dir("cli_gen_a");
  const fs::path b = test_util::temp_dir("cli_gen_b");
  ASSERT_EQ(run({"gen", "--seed", "3", "--out", a.string()}).code, 0);
  ASSERT_EQ(run({"gen", "--seed", "3", "--out", b.string()}).code, 0);
  for (const char * name : {"straight", "turn_left", "turn_right", "follow", "cut_in"}) {
    const std::string file = std::string(name) + ".json";
    ASSERT_TRUE(fs::exists(a / file)) << file;
    EXPECT_EQ(test_util::read_file(a / file), test_util::read_file(b / file));
  }
  const CliRun single =
    run({"gen", "--kind", "turn_left", "--radius", "30", "--out", (a / "one").string()});
  EXPECT_EQ(single.code, 0);
  EXPECT_TRUE(fs::exists(a / "one" / "turn_left.json"));
  EXPECT_EQ(run({"gen", "--kind", "turn_left", "--radius", "1", "--out", a.string()}).code, 2);
}

TEST(Cli, GenRejectsUnusableOutputDir)
{
  const fs::path d = test_util::temp_dir("cli_gen_bad");
  write_text(d / "file", "x");
  const CliRun r = run({"gen", "--out", (d / "file" / "sub").string()});
  EXPECT_NE(r.code, 0);
  EXPECT_NE(r.err.find("error"), std::string::npos);
}

TEST(Cli, RenderLayers)
{
  const fs::path d = test_util::temp_dir("cli_render");
  Scenario s = test_util::straight_scenario(5.0, 10);
  s.frames[2].agents.push_back({"car", {10, 0, 0}, 4.0, 2.0, 0.0});
  save_scenario(s, (d / "s.json").string());
  ASSERT_EQ(run({"render", "--scenario", (d / "s.json").string(), "--frame", "2", "--out",
    (d / "plain").string()}).code, 0);
  // No map and no boxes: the map layer leaves the BEV image untouched.
  EXPECT_EQ(read_ppm((d / "plain" / "bev.ppm").string()),
    read_ppm((d / "plain" / "bev_hd.ppm").string()));
  EXPECT_FALSE(fs::exists(d / "plain" / "overlay.ppm"));

  ASSERT_EQ(run({"render", "--scenario", (d / "s.json").string(), "--frame", "2", "--boxes",
    "--traj", "--png", "--out", (d / "boxes").string()}).code, 0);
  EXPECT_NE(read_ppm((d / "boxes" / "bev.ppm").string()),
    read_ppm((d / "boxes" / "bev_hd.ppm").string()));
  EXPECT_TRUE(fs::exists(d / "boxes" / "overlay.ppm"));
  EXPECT_TRUE(fs::exists(d / "boxes" / "bev_hd.png"));
  EXPECT_EQ(read_ppm((d / "plain" / "bev.ppm").string()),
    read_ppm((d / "boxes" / "bev.ppm").string()));

  EXPECT_EQ(run({"render", "--scenario", (d / "s.json").string(), "--frame", "99", "--out",
    (d / "bad").string()}).code, 1);
  EXPECT_EQ(run({"render", "--scenario", (d / "missing.json").string(), "--frame", "0"}).code, 1);
}

TEST(Cli, RenderUsesFeatureFile)
{
  const fs::path d = test_util::temp_dir("cli_render_bft");
  save_scenario(test_util::straight_scenario(5.0, 3), (d / "s.json").string());
  write_bft(FeatureMap(3, 180, 180, 1.0), (d / "f.bft").string());
  ASSERT_EQ(run({"render", "--scenario", (d / "s.json").string(), "--frame", "0", "--features",
    (d / "f.bft").string(), "--out", d.string()}).code, 0);
  const RgbImage img = read_ppm((d / "bev.ppm").string());
  EXPECT_EQ(img.at(5, 5), (Rgb{128, 128, 128}));
  write_bft(FeatureMap(3, 10, 10, 1.0), (d / "small.bft").string());
  EXPECT_NE(run({"render", "--scenario", (d / "s.json").string(), "--frame", "0", "--features",
    (d / "small.bft").string(), "--out", d.string()}).code, 0);
}

TEST(Cli, PlanWritesTokensAndPrompt)
{
  const fs::path d = test_util::temp_dir("cli_plan");
  save_scenario(test_util::straight_scenario(10.0, 10), (d / "s.json").string());
  const CliRun r = run({"plan", "--scenario", (d / "s.json").string(), "--frame", "0", "--planner",
    "constant_velocity", "--out", d.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const std::string plan = test_util::read_file(d / "plan.json");
  EXPECT_NE(plan.find("\"planner\": \"constant_velocity\""), std::string::npos) << plan;
  EXPECT_NE(plan.find("80220"), std::string::npos) << plan;
  EXPECT_NE(test_util::read_file(d / "prompt.txt").find("BEV-HD"), std::string::npos);
}

TEST(Cli, EvalOracleReportsZero)
{
  const fs::path d = test_util::temp_dir("cli_eval");
  ASSERT_EQ(run({"gen", "--out", (d / "sc").string()}).code, 0);
  const CliRun r = run({"eval", "--scenarios", (d / "sc").string(), "--planner", "oracle", "--out",
    (d / "out").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("samples: 175"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("0.0000  0.0000  0.0000  0.0000"), std::string::npos) << r.out;
  const std::string report = test_util::read_file(d / "out" / "report.json");
  EXPECT_NE(report.find("\"samples\": 175"), std::string::npos);
  EXPECT_TRUE(fs::exists(d / "out" / "samples.csv"));
  EXPECT_TRUE(fs::exists(d / "out" / "report.txt"));
}

TEST(Cli, EvalSkipPolicyListsFailures)
{
  const fs::path d = test_util::temp_dir("cli_eval_skip");
  save_scenario(test_util::straight_scenario(5.0, 8), (d / "s.json").string());
  const CliRun aborted = run({"eval", "--scenarios", (d / "s.json").string(), "--planner",
    "lane_follow", "--out", d.string()});
  EXPECT_EQ(aborted.code, 1);
  const CliRun skipped = run({"eval", "--scenarios", (d / "s.json").string(), "--planner",
    "lane_follow", "--failure-policy", "skip", "--out", d.string()});
  EXPECT_EQ(skipped.code, 0) << skipped.err;
  EXPECT_NE(skipped.out.find("skipped: 2"), std::string::npos) << skipped.out;
  EXPECT_NE(skipped.err.find("skipped straight_cv frame 0"), std::string::npos) << skipped.err;
}

TEST(Cli, TokenizePrintsAndWarns)
{
  const fs::path d = test_util::temp_dir("cli_tok");
  const CliRun r = run({"tokenize", "10,-5", "1000,0", "--out", d.string()});
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("(10, -5) -> token 72240 -> (10.125, -4.875) error (0.125, 0.125)"),
    std::string::npos) << r.out;
  EXPECT_NE(r.err.find("warning: (1000, 0) lies outside +-50 m and was clamped"),
    std::string::npos) << r.err;
  EXPECT_EQ(r.err.find("(10, -5)"), std::string::npos);
  EXPECT_NE(test_util::read_file(d / "tokens.json").find("72240"), std::string::npos);
}

TEST(Cli, ConfigFileAndEnvironmentFallback)
{
  const fs::path d = test_util::temp_dir("cli_cfg");
  write_text(d / "a.toml", "[vocab]\nbins_per_axis = 10\nrange = 5\n");
  write_text(d / "b.toml", "[vocab]\nbins_per_axis = 20\nrange = 5\n");
  write_text(d / "broken.toml", "[vocab\n");

  CliRun r = run({"tokenize", "0,0", "--config", (d / "a.toml").string()});
  EXPECT_NE(r.out.find("token 55 "), std::string::npos) << r.out;

  ::setenv("BEVHD_CONFIG", (d / "b.toml").c_str(), 1);
  r = run({"tokenize", "0,0"});
  EXPECT_NE(r.out.find("token 210 "), std::string::npos) << r.out;
  r = run({"tokenize", "0,0", "--config", (d / "a.toml").string()});
  EXPECT_NE(r.out.find("token 55 "), std::string::npos) << r.out;
  ::setenv("BEVHD_CONFIG", (d / "broken.toml").c_str(), 1);
  r = run({"tokenize", "0,0"});
  EXPECT_NE(r.code, 0);
  EXPECT_NE(r.err.find("broken.toml"), std::string::npos) << r.err;
  ::unsetenv("BEVHD_CONFIG");
  r = run({"tokenize", "0,0"});
  EXPECT_NE(r.out.find("token 80200 "), std::string::npos) << r.out;
}

TEST(Cli, ConfigOutputDirAndFlagOverride)
{
  const fs::path d = test_util::temp_dir("cli_outdir");
  write_text(d / "c.toml", "[eval]\noutput_dir = \"" + (d / "from_cfg").string() + "\"\n");
  ASSERT_EQ(run({"tokenize", "1,1", "--config", (d / "c.toml").string()}).code, 0);
  EXPECT_TRUE(fs::exists(d / "from_cfg" / "tokens.json"));
  ASSERT_EQ(run({"tokenize", "1,1", "--config", (d / "c.toml").string(), "--out",
    (d / "from_flag").string()}).code, 0);
  EXPECT_TRUE(fs::exists(d / "from_flag" / "tokens.json"));
}

TEST(Cli, ServeMockRejectsBadTokenCount)
{
  const CliRun r = run({"serve-mock", "--policy", "fixed_tokens", "--tokens", "1,2,3", "--port", "0"});
  EXPECT_EQ(r.code, 2);
}

}  // namespace
}  // namespace bevhd
