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

#ifndef BEVHD__WIRE_PROTOCOL_HPP_
#define BEVHD__WIRE_PROTOCOL_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>

#include "bevhd/feature_viz.hpp"
#include "bevhd/scene.hpp"
#include "bevhd/waypoint_codec.hpp"

namespace bevhd
{

inline constexpr int kWireVersion = 1;
inline constexpr const char * kPlanPath = "/v1/plan";

/// Optional per-request context. Stateless mock policies need it; real
/// planners may ignore it.
struct RequestMeta
{
  std::optional<std::string> scenario;
  std::optional<std::int64_t> frame;
  std::optional<double> ego_speed;
};

struct PlanRequest
{
  RgbImage image;
  std::string prompt;
  std::size_t horizon_steps{kHorizonSteps};
  TokenVocab vocab;
  std::optional<RequestMeta> meta;
};

struct PlanResponse
{
  std::variant<WaypointTokens, Trajectory> payload;
  std::optional<std::string> metadata;

  bool has_tokens() const { return std::holds_alternative<WaypointTokens>(payload); }
};

class PlannerError : public std::runtime_error
{
public:
  enum class Kind { timeout, transport, malformed_response, token_out_of_vocab, http_status };

  PlannerError(Kind kind, const std::string & what) : std::runtime_error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

private:
  Kind kind_;
};

std::string_view to_string(PlannerError::Kind kind);

/// Standard alphabet with padding.
std::string base64_encode(std::string_view bytes);
/// Throws FormatError on invalid input.
std::string base64_decode(std::string_view text);

std::string request_to_json(const PlanRequest & req);
/// Throws FormatError on schema violations.
PlanRequest request_from_json(std::string_view body);

std::string response_to_json(const PlanResponse & resp);
/// Validates shape and horizon length (malformed_response) and, for tokens,
/// that every token decodes under `vocab` (token_out_of_vocab).
PlanResponse response_from_json(
  std::string_view body, std::size_t horizon_steps, const TokenVocab & vocab);

std::string error_to_json(std::string_view message);

}  // namespace bevhd

#endif  // BEVHD__WIRE_PROTOCOL_HPP_
