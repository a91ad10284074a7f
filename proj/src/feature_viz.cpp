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

#include "bevhd/feature_viz.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "bevhd/kernels.hpp"

namespace bevhd
{

namespace
{

// relative cut-offs separating a real principal axis from rounding residue
constexpr double kRelativeEigenFloor = 1e-12;
constexpr double kScaleEigenFloor = 1e-20;

}  // namespace

RgbImage::RgbImage(int h, int w, Rgb fill)
: height(h), width(w), pixels(3 * static_cast<std::size_t>(h) * w)
{
  for (std::size_t i = 0; i < pixels.size(); i += 3) {
    pixels[i] = fill.r;
    pixels[i + 1] = fill.g;
    pixels[i + 2] = fill.b;
  }
}

void apply_sign_rule(std::vector<double> & v)
{
  double max_abs = 0.0;
  for (double x : v) {
    max_abs = std::max(max_abs, std::abs(x));
  }
  if (max_abs == 0.0) {
    return;
  }
  for (double x : v) {
    if (std::abs(x) >= max_abs * (1.0 - 1e-9)) {
      if (x < 0.0) {
        for (double & y : v) {
          y = -y;
        }
      }
      return;
    }
  }
}

PcaBasis fit_pca(const FeatureMap & fm)
{
  if (fm.channels < 1) {
    throw std::invalid_argument("fit_pca: need at least one channel");
  }
  if (fm.cells() < 2) {
    throw std::invalid_argument("fit_pca: need at least two cells");
  }
  if (fm.values.size() != static_cast<std::size_t>(fm.channels) * fm.cells()) {
    throw std::invalid_argument("fit_pca: value count does not match dimensions");
  }
  for (double v : fm.values) {
    if (!std::isfinite(v)) {
      throw std::invalid_argument("fit_pca: non-finite feature value");
    }
  }

  const int nc = fm.channels;
  PcaBasis basis;
  basis.mean = kernels::parallel::channel_means(fm);
  const std::vector<double> cov = kernels::parallel::covariance(fm, basis.mean);

  Eigen::MatrixXd m(nc, nc);
  double scale = 0.0;
  for (int a = 0; a < nc; ++a) {
    for (int b = 0; b < nc; ++b) {
      m(a, b) = cov[a * nc + b];
    }
    scale += basis.mean[a] * basis.mean[a] + cov[a * nc + a];
  }
  scale /= nc;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("fit_pca: eigendecomposition failed");
  }
  const Eigen::VectorXd & evals = solver.eigenvalues();  // ascending
  const double lambda_max = evals(nc - 1);
  const bool any_signal = lambda_max > 0.0 && lambda_max > kScaleEigenFloor * scale;

  for (int k = 0; k < 3 && k < nc; ++k) {
    const int idx = nc - 1 - k;
    const double lambda = evals(idx);
    if (!any_signal || !(lambda > kRelativeEigenFloor * lambda_max)) {
      break;
    }
    std::vector<double> v(nc);
    for (int c = 0; c < nc; ++c) {
      v[c] = solver.eigenvectors()(c, idx);
    }
    apply_sign_rule(v);
    basis.components[k] = std::move(v);
    basis.eigenvalues[k] = lambda;
    basis.degenerate[k] = false;
  }
  return basis;
}

std::vector<double> projection_scores(const FeatureMap & fm, const PcaBasis & basis)
{
  if (basis.channels() != fm.channels) {
    throw std::invalid_argument(
            "projection: basis has " + std::to_string(basis.channels()) +
            " channels, feature map has " + std::to_string(fm.channels));
  }
  return kernels::parallel::project_scores(fm, basis.mean, basis.components);
}

RgbImage project_to_rgb(const FeatureMap & fm, const PcaBasis & basis)
{
  const std::vector<double> scores = projection_scores(fm, basis);
  const std::size_t n = fm.cells();
  RgbImage img(fm.height, fm.width, {128, 128, 128});

  for (std::size_t k = 0; k < 3; ++k) {
    if (basis.degenerate[k]) {
      continue;
    }
    const auto first = scores.begin() + static_cast<std::ptrdiff_t>(k * n);
    const auto [lo_it, hi_it] = std::minmax_element(first, first + static_cast<std::ptrdiff_t>(n));
    const double lo = *lo_it;
    const double range = *hi_it - lo;
    if (!(range > 0.0)) {
      continue;
    }
    for (std::size_t i = 0; i < n; ++i) {
      const double q = std::floor((scores[k * n + i] - lo) / range * 255.0 + 0.5);
      img.pixels[3 * i + k] = static_cast<std::uint8_t>(std::clamp(q, 0.0, 255.0));
    }
  }
  return img;
}

RgbImage visualize(const FeatureMap & fm) { return project_to_rgb(fm, fit_pca(fm)); }

}  // namespace bevhd
