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

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "bevhd/feature_viz.hpp"
#include "oracles/jacobi.hpp"
#include "test_util.hpp"

namespace bevhd
{
namespace
{

/// Random map with a distinct variance per channel, mixed by a random rotation.
FeatureMap anisotropic_map(std::mt19937_64 & rng, int c, int h, int w)
{
  std::normal_distribution<double> nd(0.0, 1.0);
  std::uniform_real_distribution<double> off(-5, 5);
  FeatureMap fm(c, h, w);
  std::vector<double> offsets(c);
  for (auto & o : offsets) {
    o = off(rng);
  }
  for (int ch = 0; ch < c; ++ch) {
    const double sd = 4.0 / (1.0 + ch);
    for (std::size_t i = 0; i < fm.cells(); ++i) {
      fm.values[ch * fm.cells() + i] = offsets[ch] + sd * nd(rng);
    }
  }
  return fm;
}

std::vector<double> random_orthonormal(std::mt19937_64 & rng, int n)
{
  std::normal_distribution<double> nd(0.0, 1.0);
  std::vector<double> q(n * n);
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      q[r * n + c] = nd(rng);
    }
    for (int p = 0; p < r; ++p) {
      double d = 0.0;
      for (int c = 0; c < n; ++c) {
        d += q[r * n + c] * q[p * n + c];
      }
      for (int c = 0; c < n; ++c) {
        q[r * n + c] -= d * q[p * n + c];
      }
    }
    double len = 0.0;
    for (int c = 0; c < n; ++c) {
      len += q[r * n + c] * q[r * n + c];
    }
    len = std::sqrt(len);
    for (int c = 0; c < n; ++c) {
      q[r * n + c] /= len;
    }
  }
  return q;
}

FeatureMap rotate_cells(const FeatureMap & fm, const std::vector<double> & q)
{
  FeatureMap out(fm.channels, fm.height, fm.width);
  const int n = fm.channels;
  for (std::size_t i = 0; i < fm.cells(); ++i) {
    for (int r = 0; r < n; ++r) {
      double s = 0.0;
      for (int c = 0; c < n; ++c) {
        s += q[r * n + c] * fm.values[c * fm.cells() + i];
      }
      out.values[r * fm.cells() + i] = s;
    }
  }
  return out;
}

TEST(FitPca, ConstantMapIsFullyDegenerate)
{
  const FeatureMap fm(8, 16, 16, 0.37);
  const PcaBasis b = fit_pca(fm);
  for (int k = 0; k < 3; ++k) {
    EXPECT_TRUE(b.degenerate[k]);
    EXPECT_EQ(b.eigenvalues[k], 0.0);
    EXPECT_TRUE(b.components[k].empty());
  }
  EXPECT_EQ(b.mean[0], 0.37);
  const RgbImage img = project_to_rgb(fm, b);
  for (auto px : img.pixels) {
    ASSERT_EQ(px, 128);
  }
}

TEST(FitPca, SingleChannelTwoValues)
{
  FeatureMap fm(1, 4, 4);
  for (std::size_t i = 0; i < fm.values.size(); ++i) {
    fm.values[i] = static_cast<double>(i % 2);
  }
  const PcaBasis b = fit_pca(fm);
  EXPECT_DOUBLE_EQ(b.mean[0], 0.5);
  EXPECT_DOUBLE_EQ(b.eigenvalues[0], 0.25);
  ASSERT_FALSE(b.degenerate[0]);
  EXPECT_EQ(b.components[0], std::vector<double>{1.0});
  EXPECT_TRUE(b.degenerate[1]);
  EXPECT_TRUE(b.degenerate[2]);

  const RgbImage img = project_to_rgb(fm, b);
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) {
      const Rgb px = img.at(r, c);
      EXPECT_EQ(px.r, (r * 4 + c) % 2 ? 255 : 0);
      EXPECT_EQ(px.g, 128);
      EXPECT_EQ(px.b, 128);
    }
  }
}

TEST(FitPca, TwoChannelDiagonal)
{
  FeatureMap fm(2, 2, 3);
  for (std::size_t i = 0; i < fm.cells(); ++i) {
    const double v = i % 2 ? -1.0 : 1.0;
    fm.values[i] = v;
    fm.values[fm.cells() + i] = v;
  }
  const PcaBasis b = fit_pca(fm);
  EXPECT_NEAR(b.eigenvalues[0], 2.0, 1e-12);
  EXPECT_NEAR(b.components[0][0], 1.0 / std::sqrt(2.0), 1e-12);
  EXPECT_NEAR(b.components[0][1], 1.0 / std::sqrt(2.0), 1e-12);
  EXPECT_TRUE(b.degenerate[1]);
  EXPECT_TRUE(b.degenerate[2]);
}

TEST(FitPca, MatchesJacobiOracleOnRandomMaps)
{
  std::mt19937_64 rng(99);
  std::normal_distribution<double> nd(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    FeatureMap fm(8, 16, 16);
    for (auto & v : fm.values) {
      v = nd(rng);
    }
    const PcaBasis b = fit_pca(fm);
    const auto cov = oracles::brute_covariance(fm.values, 8, fm.cells());
    const auto ref = oracles::jacobi_eigen(cov, 8);
    for (int k = 0; k < 3; ++k) {
      ASSERT_FALSE(b.degenerate[k]);
      EXPECT_NEAR(b.eigenvalues[k], ref.values[k], 1e-9);
      std::vector<double> expected = ref.vectors[k];
      apply_sign_rule(expected);
      for (int c = 0; c < 8; ++c) {
        ASSERT_NEAR(b.components[k][c], expected[c], 1e-6) << "trial " << trial << " k " << k;
      }
    }
  }
}

TEST(FitPca, BasisIsOrthonormalAndSorted)
{
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const PcaBasis b = fit_pca(anisotropic_map(rng, 8, 20, 20));
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        double d = 0.0;
        for (int c = 0; c < 8; ++c) {
          d += b.components[i][c] * b.components[j][c];
        }
        EXPECT_NEAR(d, i == j ? 1.0 : 0.0, 1e-9);
      }
    }
    EXPECT_GE(b.eigenvalues[0], b.eigenvalues[1]);
    EXPECT_GE(b.eigenvalues[1], b.eigenvalues[2]);
    EXPECT_GE(b.eigenvalues[2], 0.0);
  }
}

TEST(FitPca, FewerChannelsThanComponents)
{
  std::mt19937_64 rng(6);
  const PcaBasis b = fit_pca(anisotropic_map(rng, 2, 8, 8));
  EXPECT_FALSE(b.degenerate[0]);
  EXPECT_FALSE(b.degenerate[1]);
  EXPECT_TRUE(b.degenerate[2]);
}

TEST(FitPca, RejectsBadInput)
{
  FeatureMap fm(2, 4, 4, 1.0);
  fm.values[5] = std::nan("");
  EXPECT_THROW(fit_pca(fm), std::invalid_argument);
  fm.values[5] = INFINITY;
  EXPECT_THROW(fit_pca(fm), std::invalid_argument);
  EXPECT_THROW(fit_pca(FeatureMap(2, 1, 1)), std::invalid_argument);
  EXPECT_THROW(fit_pca(FeatureMap(0, 4, 4)), std::invalid_argument);
}

TEST(SignRule, LargestMagnitudePositiveTiesToLowestIndex)
{
  std::vector<double> v{0.5, -0.7, 0.1};
  apply_sign_rule(v);
  EXPECT_EQ(v, (std::vector<double>{-0.5, 0.7, -0.1}));
  std::vector<double> tie{-0.6, 0.6, 0.2};
  apply_sign_rule(tie);
  EXPECT_EQ(tie, (std::vector<double>{0.6, -0.6, -0.2}));
  std::vector<double> tie2{0.6, -0.6};
  apply_sign_rule(tie2);
  EXPECT_EQ(tie2, (std::vector<double>{0.6, -0.6}));
}

TEST(ProjectToRgb, NonDegenerateChannelsSpanFullRange)
{
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 10; ++trial) {
    const FeatureMap fm = anisotropic_map(rng, 8, 16, 16);
    const RgbImage img = visualize(fm);
    for (int k = 0; k < 3; ++k) {
      int lo = 255;
      int hi = 0;
      for (std::size_t i = 0; i < fm.cells(); ++i) {
        lo = std::min<int>(lo, img.pixels[3 * i + k]);
        hi = std::max<int>(hi, img.pixels[3 * i + k]);
      }
      EXPECT_EQ(lo, 0);
      EXPECT_EQ(hi, 255);
    }
  }
}

TEST(ProjectToRgb, ChannelMismatchRejected)
{
  std::mt19937_64 rng(8);
  const PcaBasis b = fit_pca(anisotropic_map(rng, 8, 8, 8));
  EXPECT_THROW(project_to_rgb(anisotropic_map(rng, 4, 8, 8), b), std::invalid_argument);
}

TEST(ProjectToRgb, RotationEquivariantUpToChannelFlips)
{
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 20; ++trial) {
    const FeatureMap fm = anisotropic_map(rng, 8, 16, 16);
    const RgbImage base = visualize(fm);
    const RgbImage rotated = visualize(rotate_cells(fm, random_orthonormal(rng, 8)));
    for (int k = 0; k < 3; ++k) {
      bool same = true;
      bool complement = true;
      for (std::size_t i = 0; i < fm.cells(); ++i) {
        same = same && rotated.pixels[3 * i + k] == base.pixels[3 * i + k];
        complement = complement && rotated.pixels[3 * i + k] == 255 - base.pixels[3 * i + k];
      }
      EXPECT_TRUE(same || complement) << "trial " << trial << " channel " << k;
    }
  }
}

TEST(ProjectionScores, InvariantUnderConstantShift)
{
  std::mt19937_64 rng(10);
  std::uniform_real_distribution<double> shift(-100, 100);
  for (int trial = 0; trial < 10; ++trial) {
    const FeatureMap fm = anisotropic_map(rng, 8, 16, 16);
    FeatureMap shifted = fm;
    for (int c = 0; c < 8; ++c) {
      const double s = shift(rng);
      for (std::size_t i = 0; i < fm.cells(); ++i) {
        shifted.values[c * fm.cells() + i] += s;
      }
    }
    const PcaBasis b = fit_pca(fm);
    const auto a = projection_scores(fm, b);
    const auto sb = projection_scores(shifted, fit_pca(shifted));
    ASSERT_EQ(a.size(), sb.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      ASSERT_NEAR(a[i], sb[i], 1e-9);
    }
  }
}

TEST(Visualize, AgentCellsStandOutFromBackground)
{
  Frame f;
  AgentState a;
  a.id = "car";
  a.pose = {8, 3, 0.2};
  f.agents.push_back(a);
  const GridSpec g = default_grid();
  const FeatureMap fm = synth_feature_map(g, f, {}, 8, 4);
  const RgbImage img = visualize(fm);
  const auto occ = rasterize_agents(g, f.ego, f.agents);
  int agent_lo = 255, agent_hi = 0, bg_lo = 255, bg_hi = 0;
  for (int r = 0; r < 180; ++r) {
    for (int c = 0; c < 180; ++c) {
      const int v = img.at(r, c).r;
      if (occ.at(r, c)) {
        agent_lo = std::min(agent_lo, v);
        agent_hi = std::max(agent_hi, v);
      } else {
        bg_lo = std::min(bg_lo, v);
        bg_hi = std::max(bg_hi, v);
      }
    }
  }
  const int gap = std::max(agent_lo - bg_hi, bg_lo - agent_hi);
  EXPECT_GE(gap, 64) << "agent [" << agent_lo << "," << agent_hi << "] background [" << bg_lo
                     << "," << bg_hi << "]";
}

TEST(Visualize, Deterministic)
{
  const Scenario s = test_util::straight_scenario(3.0, 1);
  const FeatureMap fm = synth_feature_map(default_grid(), s.frames[0], s.map, 8, 1);
  EXPECT_EQ(visualize(fm), visualize(fm));
}

TEST(Ppm, EncodeDecodeRoundTrip)
{
  RgbImage img(2, 3, {1, 2, 3});
  img.set(1, 2, {255, 0, 128});
  const std::string bytes = encode_ppm(img);
  EXPECT_EQ(bytes.substr(0, 11), "P6\n3 2\n255\n");
  EXPECT_EQ(bytes.size(), 11u + 18u);
  EXPECT_EQ(decode_ppm(bytes), img);
  const auto dir = test_util::temp_dir("ppm");
  write_ppm(img, (dir / "a.ppm").string());
  EXPECT_EQ(test_util::read_file(dir / "a.ppm"), bytes);
  EXPECT_EQ(read_ppm((dir / "a.ppm").string()), img);
  std::filesystem::remove_all(dir);
}

TEST(Ppm, RejectsMalformed)
{
  const std::string good = encode_ppm(RgbImage(2, 2, {9, 9, 9}));
  EXPECT_THROW(decode_ppm("P3\n2 2\n255\n" + good.substr(11)), FormatError);
  EXPECT_THROW(decode_ppm("P6\n2 2\n65535\n" + good.substr(11)), FormatError);
  EXPECT_THROW(decode_ppm(good.substr(0, good.size() - 1)), FormatError);
  EXPECT_THROW(decode_ppm(good + "x"), FormatError);
  EXPECT_THROW(decode_ppm("P6\n-2 2\n255\n"), FormatError);
  EXPECT_THROW(decode_ppm(""), FormatError);
}

TEST(Png, WritesHeaderWithImageSize)
{
  RgbImage img(5, 7, {10, 20, 30});
  const auto dir = test_util::temp_dir("png");
  write_png(img, (dir / "a.png").string());
  const std::string bytes = test_util::read_file(dir / "a.png");
  ASSERT_GT(bytes.size(), 33u);
  EXPECT_EQ(bytes.substr(1, 3), "PNG");
  EXPECT_EQ(bytes.substr(12, 4), "IHDR");
  auto be32 = [&](std::size_t at) {
      return (static_cast<unsigned char>(bytes[at]) << 24) |
             (static_cast<unsigned char>(bytes[at + 1]) << 16) |
             (static_cast<unsigned char>(bytes[at + 2]) << 8) |
             static_cast<unsigned char>(bytes[at + 3]);
    };
  EXPECT_EQ(be32(16), 7u);
  EXPECT_EQ(be32(20), 5u);
  std::filesystem::remove_all(dir);
}

}  // namespace
}  // namespace bevhd
