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

#include "bevhd/wire_protocol.hpp"

#include <cmath>
#include <limits>

#include <openssl/evp.h>

#include "json_util.hpp"

namespace bevhd
{

using json_util::ordered_json;

std::string_view to_string(PlannerError::Kind kind)
{
  switch (kind) {
    case PlannerError::Kind::timeout:
      return "timeout";
    case PlannerError::Kind::transport:
      return "transport";
    case PlannerError::Kind::malformed_response:
      return "malformed_response";
    case PlannerError::Kind::token_out_of_vocab:
      return "token_out_of_vocab";
    case PlannerError::Kind::http_status:
      return "http_status";
  }
  return "transport";
}

std::string base64_encode(std::string_view bytes)
{
  std::string out(4 * ((bytes.size() + 2) / 3) + 1, '\0');
  const int n = EVP_EncodeBlock(
    reinterpret_cast<unsigned char *>(out.data()),
    reinterpret_cast<const unsigned char *>(bytes.data()), static_cast<int>(bytes.size()));
  out.resize(static_cast<std::size_t>(n));
  return out;
}

std::string base64_decode(std::string_view text)
{
  if (text.size() % 4 != 0) {
    throw FormatError("base64: length is not a multiple of 4");
  }
  if (text.empty()) {
    return {};
  }
  std::string out(3 * (text.size() / 4), '\0');
  const int n = EVP_DecodeBlock(
    reinterpret_cast<unsigned char *>(out.data()),
    reinterpret_cast<const unsigned char *>(text.data()), static_cast<int>(text.size()));
  if (n < 0) {
    throw FormatError("base64: invalid character");
  }
  // EVP_DecodeBlock counts padding as decoded zero bytes
  std::size_t pad = 0;
  if (text.back() == '=') {
    ++pad;
    if (text[text.size() - 2] == '=') {
      ++pad;
    }
  }
  out.resize(static_cast<std::size_t>(n) - pad);
  return out;
}

std::string request_to_json(const PlanRequest & req)
{
  ordered_json j;
  j["version"] = kWireVersion;
  j["image_ppm_base64"] = base64_encode(encode_ppm(req.image));
  j["prompt"] = req.prompt;
  j["horizon_steps"] = req.horizon_steps;
  j["vocab"]["bins_per_axis"] = req.vocab.bins_per_axis;
  j["vocab"]["range_m"] = req.vocab.range;
  if (req.meta) {
    ordered_json m = ordered_json::object();
    if (req.meta->scenario) {
      m["scenario"] = *req.meta->scenario;
    }
    if (req.meta->frame) {
      m["frame"] = *req.meta->frame;
    }
    if (req.meta->ego_speed) {
      m["ego_speed"] = *req.meta->ego_speed;
    }
    j["meta"] = std::move(m);
  }
  return j.dump();
}

namespace
{

std::int64_t integer_field(const ordered_json & j, const char * key, std::string_view where)
{
  const auto & v = json_util::field(j, key, where);
  if (!v.is_number_integer()) {
    throw FormatError(std::string(where) + "." + key + ": expected an integer");
  }
  return v.get<std::int64_t>();
}

}  // namespace

PlanRequest request_from_json(std::string_view body)
{
  const ordered_json j = json_util::parse(body, "request");
  json_util::reject_unknown_keys(
    j, {"version", "image_ppm_base64", "prompt", "horizon_steps", "vocab", "meta"}, "request");
  if (integer_field(j, "version", "request") != kWireVersion) {
    throw FormatError("request: unsupported version");
  }
  PlanRequest req;
  req.image = decode_ppm(base64_decode(json_util::string_field(j, "image_ppm_base64", "request")));
  req.prompt = json_util::string_field(j, "prompt", "request");
  const std::int64_t horizon = integer_field(j, "horizon_steps", "request");
  if (horizon < 1 || horizon > 1000) {
    throw FormatError("request: horizon_steps must be in [1, 1000]");
  }
  req.horizon_steps = static_cast<std::size_t>(horizon);

  const auto & jv = json_util::field(j, "vocab", "request");
  json_util::reject_unknown_keys(jv, {"bins_per_axis", "range_m"}, "request.vocab");
  const std::int64_t bins = integer_field(jv, "bins_per_axis", "request.vocab");
  if (bins < 2 || bins > std::numeric_limits<int>::max() / 2) {
    throw FormatError("request.vocab.bins_per_axis out of range");
  }
  req.vocab.bins_per_axis = static_cast<int>(bins);
  req.vocab.range = json_util::finite_number(jv, "range_m", "request.vocab");
  if (!(req.vocab.range > 0.0)) {
    throw FormatError("request.vocab.range_m must be positive");
  }

  if (auto it = j.find("meta"); it != j.end()) {
    json_util::reject_unknown_keys(*it, {"scenario", "frame", "ego_speed"}, "request.meta");
    RequestMeta meta;
    if (it->contains("scenario")) {
      meta.scenario = json_util::string_field(*it, "scenario", "request.meta");
    }
    if (it->contains("frame")) {
      meta.frame = integer_field(*it, "frame", "request.meta");
    }
    if (it->contains("ego_speed")) {
      meta.ego_speed = json_util::finite_number(*it, "ego_speed", "request.meta");
    }
    req.meta = std::move(meta);
  }
  return req;
}

std::string response_to_json(const PlanResponse & resp)
{
  ordered_json j;
  j["version"] = kWireVersion;
  if (const auto * tok = std::get_if<WaypointTokens>(&resp.payload)) {
    j["tokens"] = tok->tokens;
  } else {
    ordered_json pts = ordered_json::array();
    for (const auto & p : std::get<Trajectory>(resp.payload).waypoints) {
      pts.push_back(json_util::point_to_json(p));
    }
    j["waypoints"] = std::move(pts);
  }
  if (resp.metadata) {
    j["metadata"] = *resp.metadata;
  }
  return j.dump();
}

PlanResponse response_from_json(
  std::string_view body, std::size_t horizon_steps, const TokenVocab & vocab)
{
  using Kind = PlannerError::Kind;
  auto malformed = [](const std::string & why) {
      return PlannerError(Kind::malformed_response, "malformed planner response: " + why);
    };

  ordered_json j;
  try {
    j = json_util::parse(body, "response");
    json_util::reject_unknown_keys(j, {"version", "tokens", "waypoints", "metadata"}, "response");
    if (integer_field(j, "version", "response") != kWireVersion) {
      throw FormatError("response: unsupported version");
    }
  } catch (const FormatError & e) {
    throw malformed(e.what());
  }

  const bool has_tokens = j.contains("tokens");
  const bool has_waypoints = j.contains("waypoints");
  if (has_tokens == has_waypoints) {
    throw malformed("exactly one of 'tokens' or 'waypoints' is required");
  }

  PlanResponse resp;
  if (auto it = j.find("metadata"); it != j.end()) {
    if (!it->is_string()) {
      throw malformed("'metadata' must be a string");
    }
    resp.metadata = it->get<std::string>();
  }

  if (has_tokens) {
    const auto & arr = j["tokens"];
    if (!arr.is_array()) {
      throw malformed("'tokens' must be an array");
    }
    if (arr.size() != horizon_steps) {
      throw malformed(
              "expected " + std::to_string(horizon_steps) + " tokens, got " +
              std::to_string(arr.size()));
    }
    WaypointTokens tokens;
    for (const auto & t : arr) {
      if (!t.is_number_integer()) {
        throw malformed("tokens must be integers");
      }
      tokens.tokens.push_back(t.get<std::int64_t>());
    }
    for (std::size_t i = 0; i < tokens.tokens.size(); ++i) {
      if (tokens.tokens[i] < 0 || tokens.tokens[i] >= vocab.vocab_size()) {
        throw PlannerError(Kind::token_out_of_vocab, TokenOutOfVocab(i, tokens.tokens[i]).what());
      }
    }
    resp.payload = std::move(tokens);
  } else {
    const auto & arr = j["waypoints"];
    if (!arr.is_array()) {
      throw malformed("'waypoints' must be an array");
    }
    if (arr.size() != horizon_steps) {
      throw malformed(
              "expected " + std::to_string(horizon_steps) + " waypoints, got " +
              std::to_string(arr.size()));
    }
    Trajectory traj;
    try {
      for (const auto & p : arr) {
        traj.waypoints.push_back(json_util::point_from_json(p, "response.waypoints"));
      }
    } catch (const FormatError & e) {
      throw malformed(e.what());
    }
    resp.payload = std::move(traj);
  }
  return resp;
}

std::string error_to_json(std::string_view message)
{
  ordered_json j;
  j["error"] = std::string(message);
  return j.dump();
}

}  // namespace bevhd
