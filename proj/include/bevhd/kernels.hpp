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

#ifndef BEVHD__KERNELS_HPP_
#define BEVHD__KERNELS_HPP_

// Cell-wise kernels behind the BEV pipeline. `parallel` is what the library
// calls; `serial` is the straightforward reference the tests and benchmarks
// compare against. Parallel results never depend on the thread count:
// reductions run over fixed-size cell blocks combined in block order.

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "bevhd/bev_grid.hpp"

namespace bevhd::kernels
{

/// Cells per reduction block in the parallel covariance.
inline constexpr std::size_t kReductionBlock = 1024;

struct SynthInputs
{
  const FeatureSignatures * signatures{nullptr};
  const OccupancyMap * agents{nullptr};
  const OccupancyMap * corridor{nullptr};
  std::uint64_t seed{0};
};

namespace serial
{

std::vector<double> channel_means(const FeatureMap & fm);
/// C x C covariance with divisor H*W, row-major.
std::vector<double> covariance(const FeatureMap & fm, std::span<const double> mean);
/// 3 x H x W projection scores onto `components` after centring by `mean`.
std::vector<double> project_scores(
  const FeatureMap & fm, std::span<const double> mean,
  const std::array<std::vector<double>, 3> & components);
/// Tests every cell against every box.
void fill_boxes(OccupancyMap & occ, const GridSpec & spec, std::span<const OrientedBox> boxes);
/// Tests every cell against every segment.
void fill_corridor(
  OccupancyMap & occ, const GridSpec & spec, std::span<const Segment> segments,
  double half_width);
void synth_fill(FeatureMap & fm, const SynthInputs & in);

}  // namespace serial

namespace parallel
{

std::vector<double> channel_means(const FeatureMap & fm);
std::vector<double> covariance(const FeatureMap & fm, std::span<const double> mean);
std::vector<double> project_scores(
  const FeatureMap & fm, std::span<const double> mean,
  const std::array<std::vector<double>, 3> & components);
/// Row-parallel; each row only visits boxes whose bounds cover it.
void fill_boxes(OccupancyMap & occ, const GridSpec & spec, std::span<const OrientedBox> boxes);
void fill_corridor(
  OccupancyMap & occ, const GridSpec & spec, std::span<const Segment> segments,
  double half_width);
void synth_fill(FeatureMap & fm, const SynthInputs & in);

}  // namespace parallel

/// Distance from `p` to segment, snapped to 1e-9 m.
double segment_distance(const Segment & s, Vec2 p);

}  // namespace bevhd::kernels

#endif  // BEVHD__KERNELS_HPP_
