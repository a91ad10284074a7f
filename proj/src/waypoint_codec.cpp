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

#include "bevhd/waypoint_codec.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace bevhd
{

void TokenVocab::validate() const
{
  if (bins_per_axis < 2) {
    throw std::invalid_argument("vocab needs at least 2 bins per axis");
  }
  if (!(range > 0.0) || !std::isfinite(range)) {
    throw std::invalid_argument("vocab range must be positive and finite");
  }
}

TokenOutOfVocab::TokenOutOfVocab(std::size_t index, std::int64_t token)
: std::out_of_range(
    "token " + std::to_string(token) + " at index " + std::to_string(index) +
    " is outside the vocabulary"),
  index_(index), token_(token)
{
}

namespace
{

std::int64_t axis_bin(double v, const TokenVocab & vocab, bool & clamped)
{
  const auto n = static_cast<double>(vocab.bins_per_axis);
  double raw = std::floor((v + vocab.range) * n / (2.0 * vocab.range));
  raw = std::clamp(raw, -1.0, n);
  // The scaled value can round across a bin edge; settle against the edges decode uses.
  const double w = vocab.bin_width();
  if (raw >= 0.0 && v < -vocab.range + raw * w) {
    raw -= 1.0;
  } else if (raw < n && v >= -vocab.range + (raw + 1.0) * w) {
    raw += 1.0;
  }
  if (raw < 0.0) {
    clamped = true;
    return 0;
  }
  if (raw > vocab.bins_per_axis - 1) {
    clamped = true;
    return vocab.bins_per_axis - 1;
  }
  return static_cast<std::int64_t>(raw);
}

}  // namespace

std::int64_t encode_point(Vec2 p, const TokenVocab & vocab, bool * clamped)
{
  if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
    throw std::invalid_argument("cannot encode a non-finite waypoint");
  }
  bool c = false;
  const std::int64_t ix = axis_bin(p.x, vocab, c);
  const std::int64_t iy = axis_bin(p.y, vocab, c);
  if (clamped) {
    *clamped = c;
  }
  return iy * vocab.bins_per_axis + ix;
}

Vec2 decode_token(std::int64_t token, const TokenVocab & vocab)
{
  if (token < 0 || token >= vocab.vocab_size()) {
    throw TokenOutOfVocab(0, token);
  }
  const std::int64_t ix = token % vocab.bins_per_axis;
  const std::int64_t iy = token / vocab.bins_per_axis;
  const double w = vocab.bin_width();
  return {-vocab.range + (static_cast<double>(ix) + 0.5) * w,
    -vocab.range + (static_cast<double>(iy) + 0.5) * w};
}

EncodeResult encode(const Trajectory & traj, const TokenVocab & vocab)
{
  vocab.validate();
  EncodeResult out;
  out.tokens.tokens.reserve(traj.size());
  for (const auto & p : traj.waypoints) {
    bool c = false;
    out.tokens.tokens.push_back(encode_point(p, vocab, &c));
    if (c) {
      out.clamped = true;
      ++out.clamped_waypoints;
    }
  }
  return out;
}

Trajectory decode(const WaypointTokens & tokens, const TokenVocab & vocab)
{
  vocab.validate();
  Trajectory traj;
  traj.waypoints.reserve(tokens.tokens.size());
  for (std::size_t i = 0; i < tokens.tokens.size(); ++i) {
    const std::int64_t tok = tokens.tokens[i];
    if (tok < 0 || tok >= vocab.vocab_size()) {
      throw TokenOutOfVocab(i, tok);
    }
    traj.waypoints.push_back(decode_token(tok, vocab));
  }
  return traj;
}

}  // namespace bevhd
