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

#ifndef BEVHD__PIPELINE_HPP_
#define BEVHD__PIPELINE_HPP_

#include <cstdint>
#include <optional>

#include "bevhd/bev_grid.hpp"
#include "bevhd/feature_viz.hpp"
#include "bevhd/hdmap_overlay.hpp"
#include "bevhd/scene.hpp"

namespace bevhd
{

struct BevLayerOptions
{
  GridSpec grid;
  RenderStyle style;
  int channels{8};
  std::uint64_t seed{0};
  bool agent_boxes{false};  // draw agent rectangles over the map layer
};

/// The three rasters of one frame: features, their PCA visualization, and the BEV-HD Map.
struct BevLayers
{
  FeatureMap features;
  RgbImage bev;
  RgbImage bev_hd;
};

/// Synthesizes features unless `features` is given, then visualizes and composes.
BevLayers build_bev_layers(
  const Frame & frame, const HdMap & map, const BevLayerOptions & options,
  std::optional<FeatureMap> features = std::nullopt);

}  // namespace bevhd

#endif  // BEVHD__PIPELINE_HPP_
