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

#ifndef BEVHD__CONFIG_HPP_
#define BEVHD__CONFIG_HPP_

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "bevhd/bev_grid.hpp"
#include "bevhd/eval_metrics.hpp"
#include "bevhd/hdmap_overlay.hpp"
#include "bevhd/mock_server.hpp"
#include "bevhd/planners.hpp"
#include "bevhd/waypoint_codec.hpp"

namespace bevhd
{

class ConfigError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

struct ServeSettings
{
  MockPolicy policy{MockPolicy::fixed_tokens};
  std::vector<std::int64_t> tokens;
  std::string host{"127.0.0.1"};
  int port{8080};
  int delay_ms{0};
};

/**
 * @brief Everything a CLI run can be configured with.
 *
 * Loaded from a TOML-style document with the sections [grid], [vocab],
 * [style], [planner], [eval] and [serve]. Unknown sections or keys are
 * rejected, and every section is validated against its owning type.
 */
struct Config
{
  GridSpec grid;
  TokenVocab vocab;
  RenderStyle style;
  PlannerConfig planner;
  EgoBoxSpec ego_box;
  FailurePolicy failure_policy{FailurePolicy::abort};
  std::string output_dir;
  int workers{1};
  int channels{8};
  std::uint64_t seed{0};
  bool route_through_codec{false};
  bool agent_boxes{false};
  std::optional<bool> record_latency;  // unset: on for remote planners only
  ServeSettings serve;

  /// Throws ConfigError naming the first invalid setting.
  void validate() const;
};

/// Parses a config document; `origin` prefixes error messages.
Config parse_config(std::string_view text, std::string_view origin = "config");
Config load_config(const std::string & path);

/// `--config` wins over the BEVHD_CONFIG environment variable; nullopt when neither is set.
std::optional<std::string> resolve_config_path(
  const std::optional<std::string> & flag, const char * env_value);

EvalConfig make_eval_config(const Config & config);

FailurePolicy failure_policy_from_string(std::string_view name);

}  // namespace bevhd

#endif  // BEVHD__CONFIG_HPP_
