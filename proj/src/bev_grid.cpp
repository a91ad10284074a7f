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

#include "bevhd/bev_grid.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "bevhd/kernels.hpp"
#include "box_math.hpp"

namespace bevhd
{

double GridSpec::cell_diagonal() const { return std::sqrt(2.0) * cell_size(); }

void GridSpec::validate() const
{
  if (height_cells <= 0 || width_cells <= 0) {
    throw std::invalid_argument("grid cell counts must be positive");
  }
  if (height_cells != width_cells) {
    throw std::invalid_argument("grid must be square");
  }
  if (!(extent > 0.0) || !std::isfinite(extent)) {
    throw std::invalid_argument("grid extent must be positive and finite");
  }
}

GridSpec default_grid() { return GridSpec{180, 180, 50.0}; }

std::optional<Cell> point_to_cell(const GridSpec & spec, Vec2 p)
{
  const double e = spec.extent;
  const double x = snap_nm(p.x);
  const double y = snap_nm(p.y);
  if (!(x >= -e && x < e && y > -e && y <= e)) {
    return std::nullopt;
  }
  const int col = static_cast<int>(std::floor((x + e) * spec.width_cells / (2.0 * e)));
  const int row = static_cast<int>(std::floor((e - y) * spec.height_cells / (2.0 * e)));
  if (col < 0 || col >= spec.width_cells || row < 0 || row >= spec.height_cells) {
    return std::nullopt;
  }
  return Cell{row, col};
}

Cell point_to_cell_clamped(const GridSpec & spec, Vec2 p)
{
  const double e = spec.extent;
  const double x = snap_nm(p.x);
  const double y = snap_nm(p.y);
  const double col = std::floor((x + e) * spec.width_cells / (2.0 * e));
  const double row = std::floor((e - y) * spec.height_cells / (2.0 * e));
  return Cell{
    static_cast<int>(std::clamp(row, 0.0, static_cast<double>(spec.height_cells - 1))),
    static_cast<int>(std::clamp(col, 0.0, static_cast<double>(spec.width_cells - 1)))};
}

Vec2 cell_center(const GridSpec & spec, Cell cell)
{
  const double e = spec.extent;
  return {-e + (cell.col + 0.5) * (2.0 * e) / spec.width_cells,
    e - (cell.row + 0.5) * (2.0 * e) / spec.height_cells};
}

FeatureMap::FeatureMap(int c, int h, int w, double fill)
: channels(c), height(h), width(w),
  values(static_cast<std::size_t>(c) * h * w, fill)
{
}

std::size_t OccupancyMap::count() const
{
  return static_cast<std::size_t>(std::count(bits.begin(), bits.end(), std::uint8_t{1}));
}

bool OccupancyMap::intersects(const OccupancyMap & other) const
{
  if (other.height != height || other.width != width) {
    throw std::invalid_argument("occupancy maps differ in size");
  }
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] && other.bits[i]) {
      return true;
    }
  }
  return false;
}

bool box_contains(const OrientedBox & box, Vec2 p) { return detail::PreparedBox(box).contains(p); }

void fill_boxes(OccupancyMap & occ, const GridSpec & spec, std::span<const OrientedBox> boxes)
{
  kernels::parallel::fill_boxes(occ, spec, boxes);
}

OrientedBox agent_box_in_ego(const Pose2 & ego, const AgentState & agent)
{
  return {world_to_ego(ego, agent.pose.position()), yaw_to_ego(ego, agent.pose.yaw),
    agent.length, agent.width};
}

OccupancyMap rasterize_agents(
  const GridSpec & spec, const Pose2 & ego, std::span<const AgentState> agents)
{
  spec.validate();
  std::vector<OrientedBox> boxes;
  boxes.reserve(agents.size());
  for (const auto & a : agents) {
    boxes.push_back(agent_box_in_ego(ego, a));
  }
  OccupancyMap occ(spec);
  fill_boxes(occ, spec, boxes);
  return occ;
}

FeatureSignatures feature_signatures(int channels, const SynthParams & params)
{
  if (channels < 1) {
    throw std::invalid_argument("feature map needs at least one channel");
  }
  const double sep = params.separation;
  FeatureSignatures sig;
  sig.background.assign(channels, 0.0);
  sig.corridor.assign(channels, 0.0);
  sig.agent.assign(channels, 0.0);
  if (channels == 1) {
    sig.corridor[0] = sep;
    sig.agent[0] = -1.5 * sep;
  } else {
    // corridor along the all-ones direction, agent along an alternating
    // direction made orthogonal to it
    const double inv = 1.0 / std::sqrt(static_cast<double>(channels));
    std::vector<double> alt(channels);
    double proj = 0.0;
    for (int c = 0; c < channels; ++c) {
      alt[c] = (c % 2 == 0) ? 1.0 : -1.0;
      proj += alt[c] * inv;
    }
    double alt_norm2 = 0.0;
    for (int c = 0; c < channels; ++c) {
      alt[c] -= proj * inv;
      alt_norm2 += alt[c] * alt[c];
    }
    const double alt_inv = 1.0 / std::sqrt(alt_norm2);
    for (int c = 0; c < channels; ++c) {
      sig.corridor[c] = sep * inv;
      sig.agent[c] = 1.5 * sep * alt[c] * alt_inv;
    }
  }
  // per-channel amplitude so the whole noise vector stays within the bound
  sig.noise_amplitude = params.noise_fraction * sep / std::sqrt(static_cast<double>(channels));
  return sig;
}

OccupancyMap corridor_mask(
  const GridSpec & spec, const Pose2 & ego, const HdMap & map, double half_width)
{
  std::vector<Segment> segments;
  for (const auto & pl : map.polylines) {
    if (pl.kind != PolylineKind::centerline) {
      continue;
    }
    for (std::size_t i = 0; i + 1 < pl.points.size(); ++i) {
      segments.push_back({world_to_ego(ego, pl.points[i]), world_to_ego(ego, pl.points[i + 1])});
    }
  }
  OccupancyMap occ(spec);
  kernels::parallel::fill_corridor(occ, spec, segments, half_width);
  return occ;
}

FeatureMap synth_feature_map(
  const GridSpec & spec, const Frame & frame, const HdMap & map, int channels,
  std::uint64_t seed, const SynthParams & params)
{
  spec.validate();
  const FeatureSignatures sig = feature_signatures(channels, params);
  const OccupancyMap agents = rasterize_agents(spec, frame.ego, frame.agents);
  const OccupancyMap corridor = corridor_mask(spec, frame.ego, map, params.corridor_half_width);
  FeatureMap fm(channels, spec.height_cells, spec.width_cells);
  kernels::parallel::synth_fill(fm, {&sig, &agents, &corridor, seed});
  return fm;
}

std::uint64_t splitmix64(std::uint64_t & state)
{
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double uniform_from_counter(std::uint64_t seed, std::uint64_t counter)
{
  std::uint64_t state = seed + (counter + 1) * 0x9E3779B97F4A7C15ULL;
  return static_cast<double>(splitmix64(state) >> 11) * 0x1.0p-53;
}

namespace
{

constexpr char kBftMagic[4] = {'B', 'F', 'T', '1'};

void put_u32(std::string & out, std::uint32_t v)
{
  for (int i = 0; i < 4; ++i) {
    out.push_back(static_cast<char>((v >> (8 * i)) & 0xFFu));
  }
}

std::uint32_t get_u32(std::string_view in, std::size_t offset)
{
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) {
    v |= static_cast<std::uint32_t>(static_cast<unsigned char>(in[offset + i])) << (8 * i);
  }
  return v;
}

}  // namespace

std::string encode_bft(const FeatureMap & fm)
{
  std::string out(kBftMagic, 4);
  put_u32(out, static_cast<std::uint32_t>(fm.channels));
  put_u32(out, static_cast<std::uint32_t>(fm.height));
  put_u32(out, static_cast<std::uint32_t>(fm.width));
  out.reserve(out.size() + 4 * fm.values.size());
  for (double v : fm.values) {
    put_u32(out, std::bit_cast<std::uint32_t>(static_cast<float>(v)));
  }
  return out;
}

FeatureMap decode_bft(std::string_view bytes)
{
  if (bytes.size() < 16 || std::memcmp(bytes.data(), kBftMagic, 4) != 0) {
    throw FormatError("bft: bad magic or truncated header");
  }
  const std::uint64_t c = get_u32(bytes, 4);
  const std::uint64_t h = get_u32(bytes, 8);
  const std::uint64_t w = get_u32(bytes, 12);
  const std::uint64_t count = c * h * w;
  if (c == 0 || h == 0 || w == 0 || c > (1u << 20) || h > (1u << 16) || w > (1u << 16)) {
    throw FormatError("bft: implausible dimensions");
  }
  if (bytes.size() != 16 + 4 * count) {
    throw FormatError(
            "bft: payload is " + std::to_string(bytes.size() - 16) + " bytes, expected " +
            std::to_string(4 * count));
  }
  FeatureMap fm(static_cast<int>(c), static_cast<int>(h), static_cast<int>(w));
  for (std::uint64_t i = 0; i < count; ++i) {
    const float f = std::bit_cast<float>(get_u32(bytes, 16 + 4 * i));
    if (!std::isfinite(f)) {
      throw FormatError("bft: non-finite value at index " + std::to_string(i));
    }
    fm.values[i] = f;
  }
  return fm;
}

void write_bft(const FeatureMap & fm, const std::string & path)
{
  std::ofstream out(path, std::ios::binary);
  const std::string bytes = encode_bft(fm);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) {
    throw std::runtime_error("cannot write " + path);
  }
}

FeatureMap read_bft(const std::string & path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("cannot open " + path);
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return decode_bft(ss.str());
}

}  // namespace bevhd
