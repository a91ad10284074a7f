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

#include "bevhd/pipeline.hpp"

#include <stdexcept>

namespace bevhd
{

BevLayers build_bev_layers(
  const Frame & frame, const HdMap & map, const BevLayerOptions & options,
  std::optional<FeatureMap> features)
{
  BevLayers out;
  if (features) {
    if (features->height != options.grid.height_cells || features->width != options.grid.width_cells) {
      throw std::invalid_argument("feature map dimensions do not match the grid");
    }
    out.features = std::move(*features);
  } else {
    out.features = synth_feature_map(options.grid, frame, map, options.channels, options.seed);
  }
  out.bev = visualize(out.features);
  out.bev_hd = compose_bev_hd(out.bev, map, frame.ego, options.grid, options.style);
  if (options.agent_boxes) {
    out.bev_hd = render_agent_boxes(
      std::move(out.bev_hd), frame.ego, frame.agents, options.grid, options.style);
  }
  return out;
}

}  // namespace bevhd
