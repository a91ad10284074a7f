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

#ifndef BEVHD__FEATURE_VIZ_HPP_
#define BEVHD__FEATURE_VIZ_HPP_

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "bevhd/bev_grid.hpp"

namespace bevhd
{

struct Rgb
{
  std::uint8_t r{0};
  std::uint8_t g{0};
  std::uint8_t b{0};
  friend constexpr bool operator==(Rgb, Rgb) = default;
};

/// H x W RGB raster, row-major, 3 bytes per pixel.
struct RgbImage
{
  int height{0};
  int width{0};
  std::vector<std::uint8_t> pixels;

  RgbImage() = default;
  RgbImage(int h, int w, Rgb fill = {0, 0, 0});

  Rgb at(int row, int col) const
  {
    const std::size_t i = 3 * (static_cast<std::size_t>(row) * width + col);
    return {pixels[i], pixels[i + 1], pixels[i + 2]};
  }
  void set(int row, int col, Rgb c)
  {
    const std::size_t i = 3 * (static_cast<std::size_t>(row) * width + col);
    pixels[i] = c.r;
    pixels[i + 1] = c.g;
    pixels[i + 2] = c.b;
  }
  friend bool operator==(const RgbImage &, const RgbImage &) = default;
};

/**
 * @brief Top-3 principal axes of a feature map's per-cell channel vectors.
 *
 * Components are unit C-vectors in descending eigenvalue order, each signed
 * so its largest-magnitude entry is positive (ties go to the lowest index).
 * A component is degenerate when fewer than k+1 positive eigenvalues exist;
 * its vector is then empty and its eigenvalue 0.
 */
struct PcaBasis
{
  std::vector<double> mean;
  std::array<std::vector<double>, 3> components;
  std::array<double, 3> eigenvalues{0.0, 0.0, 0.0};
  std::array<bool, 3> degenerate{true, true, true};

  int channels() const { return static_cast<int>(mean.size()); }
};

/// Per-frame PCA over all H*W cells (covariance divisor H*W).
/// Throws std::invalid_argument on non-finite values or H*W < 2.
PcaBasis fit_pca(const FeatureMap & fm);

/// Flips `v` so its largest-magnitude entry is positive (ties: lowest index).
void apply_sign_rule(std::vector<double> & v);

/// Centre, project, and min-max each score channel to [0, 255] (round half up).
/// Degenerate channels are 128. Throws std::invalid_argument on channel mismatch.
RgbImage project_to_rgb(const FeatureMap & fm, const PcaBasis & basis);

/// Unquantized projection scores, 3 x H x W (zeros for degenerate channels).
std::vector<double> projection_scores(const FeatureMap & fm, const PcaBasis & basis);

RgbImage visualize(const FeatureMap & fm);

// Image files. PPM (P6, maxval 255) is canonical; PNG carries the same pixels.
std::string encode_ppm(const RgbImage & img);
/// Throws FormatError on anything but a well-formed P6/255 image.
RgbImage decode_ppm(std::string_view bytes);
void write_ppm(const RgbImage & img, const std::string & path);
RgbImage read_ppm(const std::string & path);
void write_png(const RgbImage & img, const std::string & path);

}  // namespace bevhd

#endif  // BEVHD__FEATURE_VIZ_HPP_
