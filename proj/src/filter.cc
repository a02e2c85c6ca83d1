// Copyright 2026 The srbench Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "filter.h"

#include <algorithm>
#include <cmath>
#include <cstddef>

namespace srbench::internal {

std::vector<double> gaussian_taps(int size, double sigma) {
  std::vector<double> taps(size);
  const int half = size / 2;
  double sum = 0.0;
  for (int i = 0; i < size; ++i) {
    const double d = i - half;
    taps[i] = std::exp(-(d * d) / (2.0 * sigma * sigma));
    sum += taps[i];
  }
  for (double& t : taps) t /= sum;
  return taps;
}

std::vector<double> filter_valid(const std::vector<double>& plane, int width,
                                 int height, const std::vector<double>& taps) {
  const int size = static_cast<int>(taps.size());
  const int ow = width - size + 1;
  const int oh = height - size + 1;
  std::vector<double> rows(static_cast<std::size_t>(ow) * height);
  for (int y = 0; y < height; ++y) {
    const double* in = plane.data() + static_cast<std::size_t>(y) * width;
    double* out = rows.data() + static_cast<std::size_t>(y) * ow;
    for (int x = 0; x < ow; ++x) {
      double acc = 0.0;
      for (int k = 0; k < size; ++k) acc += taps[k] * in[x + k];
      out[x] = acc;
    }
  }
  std::vector<double> out(static_cast<std::size_t>(ow) * oh, 0.0);
  for (int y = 0; y < oh; ++y) {
    double* dst = out.data() + static_cast<std::size_t>(y) * ow;
    for (int k = 0; k < size; ++k) {
      const double w = taps[k];
      const double* src = rows.data() + static_cast<std::size_t>(y + k) * ow;
      for (int x = 0; x < ow; ++x) dst[x] += w * src[x];
    }
  }
  return out;
}

std::vector<double> filter_replicate(const std::vector<double>& plane,
                                     int width, int height,
                                     const std::vector<double>& taps) {
  const int size = static_cast<int>(taps.size());
  const int half = size / 2;
  std::vector<double> rows(plane.size());
  for (int y = 0; y < height; ++y) {
    const double* in = plane.data() + static_cast<std::size_t>(y) * width;
    double* out = rows.data() + static_cast<std::size_t>(y) * width;
    for (int x = 0; x < width; ++x) {
      double acc = 0.0;
      for (int k = 0; k < size; ++k) {
        acc += taps[k] * in[std::clamp(x + k - half, 0, width - 1)];
      }
      out[x] = acc;
    }
  }
  std::vector<double> out(plane.size(), 0.0);
  for (int y = 0; y < height; ++y) {
    double* dst = out.data() + static_cast<std::size_t>(y) * width;
    for (int k = 0; k < size; ++k) {
      const int sy = std::clamp(y + k - half, 0, height - 1);
      const double w = taps[k];
      const double* src = rows.data() + static_cast<std::size_t>(sy) * width;
      for (int x = 0; x < width; ++x) dst[x] += w * src[x];
    }
  }
  return out;
}

}  // namespace srbench::internal
