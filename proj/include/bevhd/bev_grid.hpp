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

#ifndef BEVHD__BEV_GRID_HPP_
#define BEVHD__BEV_GRID_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bevhd/geometry.hpp"
#include "bevhd/scene.hpp"

namespace bevhd
{

/**
 * @brief Square ego-centred BEV raster.
 *
 * Column index grows with ego +x (forward), row index grows with ego -y
 * (rightwards), so ego-left is image-top and forward is image-right.
 */
struct GridSpec
{
  int height_cells{180};
  int width_cells{180};
  double extent{50.0};  // half-range per axis, metres

  double cell_size() const { return 2.0 * extent / width_cells; }
  double cell_diagonal() const;
  /// Throws std::invalid_argument if the grid is not square or extent <= 0.
  void validate() const;
  friend bool operator==(const GridSpec &, const GridSpec &) = default;
};

/// 180 x 180 cells over +-50 m.
GridSpec default_grid();

struct Cell
{
  int row{0};
  int col{0};
  friend bool operator==(Cell, Cell) = default;
};

/// Half-open binning on [-extent, extent); nullopt outside.
std::optional<Cell> point_to_cell(const GridSpec & spec, Vec2 p);
/// Like point_to_cell but clamps to the border instead of rejecting.
Cell point_to_cell_clamped(const GridSpec & spec, Vec2 p);
Vec2 cell_center(const GridSpec & spec, Cell cell);

/// C x H x W scalars, channel-major then row-major.
struct FeatureMap
{
  int channels{0};
  int height{0};
  int width{0};
  std::vector<double> values;

  FeatureMap() = default;
  FeatureMap(int c, int h, int w, double fill = 0.0);

  std::size_t cells() const { return static_cast<std::size_t>(height) * width; }
  std::size_t index(int c, int row, int col) const
  {
    return (static_cast<std::size_t>(c) * height + row) * width + col;
  }
  double & at(int c, int row, int col) { return values[index(c, row, col)]; }
  double at(int c, int row, int col) const { return values[index(c, row, col)]; }
  friend bool operator==(const FeatureMap &, const FeatureMap &) = default;
};

struct OccupancyMap
{
  int height{0};
  int width{0};
  std::vector<std::uint8_t> bits;

  OccupancyMap() = default;
  OccupancyMap(int h, int w) : height(h), width(w), bits(static_cast<std::size_t>(h) * w, 0) {}
  explicit OccupancyMap(const GridSpec & spec) : OccupancyMap(spec.height_cells, spec.width_cells)
  {
  }

  bool at(int row, int col) const { return bits[static_cast<std::size_t>(row) * width + col] != 0; }
  void set(int row, int col) { bits[static_cast<std::size_t>(row) * width + col] = 1; }
  std::size_t count() const;
  bool intersects(const OccupancyMap & other) const;
  friend bool operator==(const OccupancyMap &, const OccupancyMap &) = default;
};

/// True iff `p` is inside or on the rectangle. Local coordinates are snapped
/// to 1e-9 m first so the test is stable under rigid re-expression.
bool box_contains(const OrientedBox & box, Vec2 p);

/// Sets every cell whose centre lies inside one of the ego-frame boxes.
void fill_boxes(OccupancyMap & occ, const GridSpec & spec, std::span<const OrientedBox> boxes);

/// Agent rectangles placed in `ego`'s frame and rasterized by cell-centre containment.
OccupancyMap rasterize_agents(
  const GridSpec & spec, const Pose2 & ego, std::span<const AgentState> agents);

/// Agent rectangle expressed in the ego frame.
OrientedBox agent_box_in_ego(const Pose2 & ego, const AgentState & agent);

/// Construction parameters for the synthetic feature stand-in.
struct SynthParams
{
  double separation{1.0};           // min distance between class signatures
  double noise_fraction{0.1};       // noise-vector norm bound / separation
  double corridor_half_width{1.75}; // metres either side of a centerline
};

/// Per-class signatures (background, corridor, agent), each `channels` long.
struct FeatureSignatures
{
  std::vector<double> background;
  std::vector<double> corridor;
  std::vector<double> agent;
  double noise_amplitude{0.0};  // per-channel uniform half-width
};

FeatureSignatures feature_signatures(int channels, const SynthParams & params = {});

/// Deterministic stand-in for a learned BEV encoder: class signature per cell
/// plus seeded uniform noise. Same inputs and seed give bit-identical output.
FeatureMap synth_feature_map(
  const GridSpec & spec, const Frame & frame, const HdMap & map, int channels,
  std::uint64_t seed, const SynthParams & params = {});

/// Ego-frame corridor mask: cells within `half_width` of any centerline segment.
OccupancyMap corridor_mask(
  const GridSpec & spec, const Pose2 & ego, const HdMap & map, double half_width);

// splitmix64 step; `state` is advanced.
std::uint64_t splitmix64(std::uint64_t & state);
/// Counter-based uniform in [0, 1): splitmix64 seeded with seed + (counter + 1) * golden.
double uniform_from_counter(std::uint64_t seed, std::uint64_t counter);

// ".bft" tensor file: "BFT1", u32 C, H, W (LE), then C*H*W f32 LE.
std::string encode_bft(const FeatureMap & fm);
/// Throws FormatError on bad magic or size mismatch.
FeatureMap decode_bft(std::string_view bytes);
void write_bft(const FeatureMap & fm, const std::string & path);
FeatureMap read_bft(const std::string & path);

}  // namespace bevhd

#endif  // BEVHD__BEV_GRID_HPP_
