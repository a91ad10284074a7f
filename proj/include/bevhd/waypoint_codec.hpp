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

#ifndef BEVHD__WAYPOINT_CODEC_HPP_
#define BEVHD__WAYPOINT_CODEC_HPP_

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "bevhd/scene.hpp"

namespace bevhd
{

/// Uniform square binning of ego-frame waypoints; one token per waypoint.
struct TokenVocab
{
  int bins_per_axis{400};
  double range{50.0};  // half-range per axis, metres

  double bin_width() const { return 2.0 * range / bins_per_axis; }
  std::int64_t vocab_size() const
  {
    return static_cast<std::int64_t>(bins_per_axis) * bins_per_axis;
  }
  /// Throws std::invalid_argument if bins_per_axis < 2 or range <= 0.
  void validate() const;
  friend bool operator==(const TokenVocab &, const TokenVocab &) = default;
};

struct WaypointTokens
{
  std::vector<std::int64_t> tokens;
  friend bool operator==(const WaypointTokens &, const WaypointTokens &) = default;
};

struct EncodeResult
{
  WaypointTokens tokens;
  bool clamped{false};
  std::size_t clamped_waypoints{0};
};

/// Raised by decode for a token outside [0, vocab_size).
class TokenOutOfVocab : public std::out_of_range
{
public:
  TokenOutOfVocab(std::size_t index, std::int64_t token);
  std::size_t index() const { return index_; }
  std::int64_t token() const { return token_; }

private:
  std::size_t index_;
  std::int64_t token_;
};

/// token = iy * bins + ix with per-axis floor binning, clamped to the grid.
EncodeResult encode(const Trajectory & traj, const TokenVocab & vocab);
/// Bin centres.
Trajectory decode(const WaypointTokens & tokens, const TokenVocab & vocab);

std::int64_t encode_point(Vec2 p, const TokenVocab & vocab, bool * clamped = nullptr);
Vec2 decode_token(std::int64_t token, const TokenVocab & vocab);

}  // namespace bevhd

#endif  // BEVHD__WAYPOINT_CODEC_HPP_
