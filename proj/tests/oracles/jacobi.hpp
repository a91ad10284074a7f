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

#ifndef ORACLES__JACOBI_HPP_
#define ORACLES__JACOBI_HPP_

// Cyclic Jacobi eigendecomposition of a small symmetric matrix. Deliberately
// naive and independent of the library's solver.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <vector>

namespace oracles
{

struct EigenPairs
{
  std::vector<double> values;                // descending
  std::vector<std::vector<double>> vectors;  // vectors[k] belongs to values[k]
};

inline EigenPairs jacobi_eigen(std::vector<double> a, std::size_t n)
{
  std::vector<double> v(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    v[i * n + i] = 1.0;
  }
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        off += a[p * n + q] * a[p * n + q];
      }
    }
    if (off < 1e-30) {
      break;
    }
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a[p * n + q];
        if (std::abs(apq) < 1e-300) {
          continue;
        }
        const double theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
          (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a[k * n + p];
          const double akq = a[k * n + q];
          a[k * n + p] = c * akp - s * akq;
          a[k * n + q] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a[p * n + k];
          const double aqk = a[q * n + k];
          a[p * n + k] = c * apk - s * aqk;
          a[q * n + k] = s * apk + c * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v[k * n + p];
          const double vkq = v[k * n + q];
          v[k * n + p] = c * vkp - s * vkq;
          v[k * n + q] = s * vkp + c * vkq;
        }
      }
    }
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
      return a[i * n + i] > a[j * n + j];
    });
  EigenPairs out;
  for (auto k : order) {
    out.values.push_back(a[k * n + k]);
    std::vector<double> vec(n);
    for (std::size_t r = 0; r < n; ++r) {
      vec[r] = v[r * n + k];
    }
    out.vectors.push_back(std::move(vec));
  }
  return out;
}

/// Plain two-pass sample covariance of cell vectors, divisor = cell count.
inline std::vector<double> brute_covariance(
  const std::vector<double> & values, std::size_t channels, std::size_t cells)
{
  std::vector<double> mean(channels, 0.0);
  for (std::size_t c = 0; c < channels; ++c) {
    for (std::size_t i = 0; i < cells; ++i) {
      mean[c] += values[c * cells + i];
    }
    mean[c] /= static_cast<double>(cells);
  }
  std::vector<double> cov(channels * channels, 0.0);
  for (std::size_t a = 0; a < channels; ++a) {
    for (std::size_t b = 0; b < channels; ++b) {
      double s = 0.0;
      for (std::size_t i = 0; i < cells; ++i) {
        s += (values[a * cells + i] - mean[a]) * (values[b * cells + i] - mean[b]);
      }
      cov[a * channels + b] = s / static_cast<double>(cells);
    }
  }
  return cov;
}

}  // namespace oracles

#endif  // ORACLES__JACOBI_HPP_
