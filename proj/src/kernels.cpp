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

#include "bevhd/kernels.hpp"

#include <algorithm>
#include <cmath>

#include "box_math.hpp"

namespace bevhd::kernels
{

namespace
{

/// Neumaier-compensated running sum.
struct CompensatedSum
{
  double sum{0.0};
  double carry{0.0};

  void add(double v)
  {
    const double t = sum + v;
    if (std::abs(sum) >= std::abs(v)) {
      carry += (sum - t) + v;
    } else {
      carry += (v - t) + sum;
    }
    sum = t;
  }
  void add(const CompensatedSum & other)
  {
    add(other.sum);
    add(other.carry);
  }
  double value() const { return sum + carry; }
};

std::size_t block_count(std::size_t n) { return (n + kReductionBlock - 1) / kReductionBlock; }

/// Constant channels get their exact value as mean so their deviations are exactly zero.
bool constant_channel(const FeatureMap & fm, int c, double & value)
{
  const std::size_t n = fm.cells();
  const double * v = fm.values.data() + static_cast<std::size_t>(c) * n;
  value = v[0];
  for (std::size_t i = 1; i < n; ++i) {
    if (v[i] != value) {
      return false;
    }
  }
  return true;
}

void segment_bounds(const Segment & s, double pad, Vec2 & lo, Vec2 & hi)
{
  lo = {std::min(s.a.x, s.b.x) - pad, std::min(s.a.y, s.b.y) - pad};
  hi = {std::max(s.a.x, s.b.x) + pad, std::max(s.a.y, s.b.y) + pad};
}

double noise_unit(std::uint64_t seed, std::size_t counter)
{
  return 2.0 * uniform_from_counter(seed, counter) - 1.0;
}

double synth_value(const SynthInputs & in, std::size_t cell, int c, std::size_t counter)
{
  const auto & sig = *in.signatures;
  double base = sig.background[c];
  if (in.agents->bits[cell]) {
    base = sig.agent[c];
  } else if (in.corridor->bits[cell]) {
    base = sig.corridor[c];
  }
  return base + sig.noise_amplitude * noise_unit(in.seed, counter);
}

}  // namespace

double segment_distance(const Segment & s, Vec2 p)
{
  const Vec2 d = s.b - s.a;
  const double len2 = dot(d, d);
  double t = 0.0;
  if (len2 > 0.0) {
    t = std::clamp(dot(p - s.a, d) / len2, 0.0, 1.0);
  }
  return snap_nm(norm(p - (s.a + t * d)));
}

namespace serial
{

std::vector<double> channel_means(const FeatureMap & fm)
{
  const std::size_t n = fm.cells();
  std::vector<double> mean(fm.channels, 0.0);
  for (int c = 0; c < fm.channels; ++c) {
    double constant = 0.0;
    if (constant_channel(fm, c, constant)) {
      mean[c] = constant;
      continue;
    }
    CompensatedSum acc;
    for (std::size_t i = 0; i < n; ++i) {
      acc.add(fm.values[c * n + i]);
    }
    mean[c] = acc.value() / static_cast<double>(n);
  }
  return mean;
}

std::vector<double> covariance(const FeatureMap & fm, std::span<const double> mean)
{
  const std::size_t n = fm.cells();
  const int nc = fm.channels;
  std::vector<double> cov(static_cast<std::size_t>(nc) * nc, 0.0);
  for (int a = 0; a < nc; ++a) {
    for (int b = a; b < nc; ++b) {
      double acc = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        acc += (fm.values[a * n + i] - mean[a]) * (fm.values[b * n + i] - mean[b]);
      }
      cov[a * nc + b] = acc / static_cast<double>(n);
      cov[b * nc + a] = cov[a * nc + b];
    }
  }
  return cov;
}

std::vector<double> project_scores(
  const FeatureMap & fm, std::span<const double> mean,
  const std::array<std::vector<double>, 3> & components)
{
  const std::size_t n = fm.cells();
  std::vector<double> scores(3 * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < 3; ++k) {
      if (components[k].empty()) {
        continue;
      }
      double s = 0.0;
      for (int c = 0; c < fm.channels; ++c) {
        s += (fm.values[c * n + i] - mean[c]) * components[k][c];
      }
      scores[k * n + i] = s;
    }
  }
  return scores;
}

void fill_boxes(OccupancyMap & occ, const GridSpec & spec, std::span<const OrientedBox> boxes)
{
  for (const auto & box : boxes) {
    const detail::PreparedBox pb(box);
    for (int r = 0; r < spec.height_cells; ++r) {
      for (int c = 0; c < spec.width_cells; ++c) {
        if (pb.contains(cell_center(spec, {r, c}))) {
          occ.set(r, c);
        }
      }
    }
  }
}

void fill_corridor(
  OccupancyMap & occ, const GridSpec & spec, std::span<const Segment> segments,
  double half_width)
{
  for (int r = 0; r < spec.height_cells; ++r) {
    for (int c = 0; c < spec.width_cells; ++c) {
      const Vec2 p = cell_center(spec, {r, c});
      for (const auto & s : segments) {
        if (segment_distance(s, p) <= half_width) {
          occ.set(r, c);
          break;
        }
      }
    }
  }
}

void synth_fill(FeatureMap & fm, const SynthInputs & in)
{
  const std::size_t n = fm.cells();
  for (int c = 0; c < fm.channels; ++c) {
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t idx = static_cast<std::size_t>(c) * n + i;
      fm.values[idx] = synth_value(in, i, c, idx);
    }
  }
}

}  // namespace serial

namespace parallel
{

std::vector<double> channel_means(const FeatureMap & fm)
{
  const std::size_t n = fm.cells();
  const std::size_t nblocks = block_count(n);
  const int nc = fm.channels;
  std::vector<CompensatedSum> partial(nblocks * nc);

#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t b = 0; b < static_cast<std::ptrdiff_t>(nblocks); ++b) {
    const std::size_t begin = b * kReductionBlock;
    const std::size_t end = std::min(n, begin + kReductionBlock);
    for (int c = 0; c < nc; ++c) {
      CompensatedSum & acc = partial[b * nc + c];
      const double * v = fm.values.data() + static_cast<std::size_t>(c) * n;
      for (std::size_t i = begin; i < end; ++i) {
        acc.add(v[i]);
      }
    }
  }

  std::vector<double> mean(nc, 0.0);
  for (int c = 0; c < nc; ++c) {
    double constant = 0.0;
    if (constant_channel(fm, c, constant)) {
      mean[c] = constant;
      continue;
    }
    CompensatedSum total;
    for (std::size_t b = 0; b < nblocks; ++b) {
      total.add(partial[b * nc + c]);
    }
    mean[c] = total.value() / static_cast<double>(n);
  }
  return mean;
}

std::vector<double> covariance(const FeatureMap & fm, std::span<const double> mean)
{
  const std::size_t n = fm.cells();
  const std::size_t nblocks = block_count(n);
  const std::size_t nc = fm.channels;
  const std::size_t tri = nc * (nc + 1) / 2;
  std::vector<double> partial(nblocks * tri, 0.0);

#pragma omp parallel
  {
    std::vector<double> dev(nc);
#pragma omp for schedule(static)
    for (std::ptrdiff_t b = 0; b < static_cast<std::ptrdiff_t>(nblocks); ++b) {
      const std::size_t begin = b * kReductionBlock;
      const std::size_t end = std::min(n, begin + kReductionBlock);
      double * acc = partial.data() + b * tri;
      for (std::size_t i = begin; i < end; ++i) {
        for (std::size_t c = 0; c < nc; ++c) {
          dev[c] = fm.values[c * n + i] - mean[c];
        }
        std::size_t k = 0;
        for (std::size_t a = 0; a < nc; ++a) {
          for (std::size_t bb = a; bb < nc; ++bb) {
            acc[k++] += dev[a] * dev[bb];
          }
        }
      }
    }
  }

  std::vector<double> cov(nc * nc, 0.0);
  std::size_t k = 0;
  for (std::size_t a = 0; a < nc; ++a) {
    for (std::size_t bb = a; bb < nc; ++bb, ++k) {
      double total = 0.0;
      for (std::size_t blk = 0; blk < nblocks; ++blk) {
        total += partial[blk * tri + k];
      }
      cov[a * nc + bb] = total / static_cast<double>(n);
      cov[bb * nc + a] = cov[a * nc + bb];
    }
  }
  return cov;
}

std::vector<double> project_scores(
  const FeatureMap & fm, std::span<const double> mean,
  const std::array<std::vector<double>, 3> & components)
{
  const std::size_t n = fm.cells();
  std::vector<double> scores(3 * n, 0.0);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t ii = 0; ii < static_cast<std::ptrdiff_t>(n); ++ii) {
    const std::size_t i = ii;
    for (std::size_t k = 0; k < 3; ++k) {
      if (components[k].empty()) {
        continue;
      }
      double s = 0.0;
      for (int c = 0; c < fm.channels; ++c) {
        s += (fm.values[c * n + i] - mean[c]) * components[k][c];
      }
      scores[k * n + i] = s;
    }
  }
  return scores;
}

void fill_boxes(OccupancyMap & occ, const GridSpec & spec, std::span<const OrientedBox> boxes)
{
  std::vector<detail::PreparedBox> prepared;
  std::vector<detail::CellRange> ranges;
  prepared.reserve(boxes.size());
  ranges.reserve(boxes.size());
  for (const auto & box : boxes) {
    prepared.emplace_back(box);
    const auto corners = box.corners();
    Vec2 lo = corners[0];
    Vec2 hi = corners[0];
    for (const auto & p : corners) {
      lo = {std::min(lo.x, p.x), std::min(lo.y, p.y)};
      hi = {std::max(hi.x, p.x), std::max(hi.y, p.y)};
    }
    ranges.push_back(detail::cell_range(spec, lo, hi));
  }

#pragma omp parallel for schedule(static)
  for (int r = 0; r < spec.height_cells; ++r) {
    for (std::size_t k = 0; k < prepared.size(); ++k) {
      const auto & rg = ranges[k];
      if (r < rg.row_lo || r > rg.row_hi) {
        continue;
      }
      for (int c = rg.col_lo; c <= rg.col_hi; ++c) {
        if (prepared[k].contains(cell_center(spec, {r, c}))) {
          occ.set(r, c);
        }
      }
    }
  }
}

void fill_corridor(
  OccupancyMap & occ, const GridSpec & spec, std::span<const Segment> segments,
  double half_width)
{
  std::vector<detail::CellRange> ranges;
  ranges.reserve(segments.size());
  for (const auto & s : segments) {
    Vec2 lo;
    Vec2 hi;
    segment_bounds(s, half_width, lo, hi);
    ranges.push_back(detail::cell_range(spec, lo, hi));
  }

#pragma omp parallel for schedule(dynamic, 8)
  for (int r = 0; r < spec.height_cells; ++r) {
    for (std::size_t k = 0; k < segments.size(); ++k) {
      const auto & rg = ranges[k];
      if (r < rg.row_lo || r > rg.row_hi) {
        continue;
      }
      for (int c = rg.col_lo; c <= rg.col_hi; ++c) {
        if (!occ.at(r, c) && segment_distance(segments[k], cell_center(spec, {r, c})) <= half_width) {
          occ.set(r, c);
        }
      }
    }
  }
}

void synth_fill(FeatureMap & fm, const SynthInputs & in)
{
  const std::size_t n = fm.cells();
  const std::ptrdiff_t total = static_cast<std::ptrdiff_t>(n) * fm.channels;
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t idx = 0; idx < total; ++idx) {
    const int c = static_cast<int>(idx / static_cast<std::ptrdiff_t>(n));
    const std::size_t i = static_cast<std::size_t>(idx) % n;
    fm.values[idx] = synth_value(in, i, c, static_cast<std::size_t>(idx));
  }
}

}  // namespace parallel

}  // namespace bevhd::kernels
