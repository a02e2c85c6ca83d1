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

#include "srbench/resize.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>

#include "srbench/errors.h"

namespace srbench {

double cubic_kernel(double x, double a) {
  const double ax = std::abs(x);
  const double ax2 = ax * ax;
  const double ax3 = ax2 * ax;
  if (ax <= 1.0) return (a + 2.0) * ax3 - (a + 3.0) * ax2 + 1.0;
  if (ax < 2.0) return a * ax3 - 5.0 * a * ax2 + 8.0 * a * ax - 4.0 * a;
  return 0.0;
}

int scaled_length(int length, Ratio scale) {
  if (scale.num <= 0 || scale.den <= 0) {
    throw InvalidArgument("resize scale must be a positive ratio");
  }
  const std::int64_t twice =
      2 * static_cast<std::int64_t>(length) * scale.num + scale.den;
  return static_cast<int>(twice / (2 * static_cast<std::int64_t>(scale.den)));
}

std::vector<ResampleTaps> resample_taps(int in_length, int out_length,
                                        const ResizeSpec& spec) {
  const double scale = spec.scale.value();
  const bool dilate = spec.antialias && scale < 1.0;
  const double stretch = dilate ? scale : 1.0;
  const double support = 4.0 / stretch;
  const int taps = static_cast<int>(std::ceil(support)) + 2;

  std::vector<ResampleTaps> out(out_length);
  for (int i = 0; i < out_length; ++i) {
    const double u = (i + 0.5) / scale - 0.5;
    const int left = static_cast<int>(std::floor(u - support / 2.0));
    ResampleTaps& t = out[i];
    t.index.resize(taps);
    t.weight.resize(taps);
    double sum = 0.0;
    for (int k = 0; k < taps; ++k) {
      const int j = left + k;
      const double w =
          stretch * cubic_kernel(stretch * (u - j), spec.kernel_sharpness);
      t.index[k] = std::clamp(j, 0, in_length - 1);
      t.weight[k] = w;
      sum += w;
    }
    for (double& w : t.weight) w /= sum;
  }
  return out;
}

ImageBuffer bicubic_resize(const ImageBuffer& image, const ResizeSpec& spec) {
  const int out_w = scaled_length(image.width(), spec.scale);
  const int out_h = scaled_length(image.height(), spec.scale);
  if (out_w < 1 || out_h < 1) {
    throw InvalidArgument("resize of " + std::to_string(image.width()) + "x" +
                          std::to_string(image.height()) +
                          " yields a zero output dimension");
  }
  const int channels = image.channels();
  const auto xtaps = resample_taps(image.width(), out_w, spec);
  const auto ytaps = resample_taps(image.height(), out_h, spec);

  // Horizontal pass into an unclamped intermediate of out_w x height.
  std::vector<double> mid(static_cast<std::size_t>(out_w) * image.height() *
                          channels);
  const auto src = image.samples();
  for (int y = 0; y < image.height(); ++y) {
    const double* row =
        src.data() + static_cast<std::size_t>(y) * image.width() * channels;
    double* dst = mid.data() + static_cast<std::size_t>(y) * out_w * channels;
    for (int x = 0; x < out_w; ++x) {
      const ResampleTaps& t = xtaps[x];
      for (int c = 0; c < channels; ++c) {
        double acc = 0.0;
        for (std::size_t k = 0; k < t.index.size(); ++k) {
          acc += t.weight[k] * row[t.index[k] * channels + c];
        }
        dst[x * channels + c] = acc;
      }
    }
  }

  ImageBuffer out(out_w, out_h, channels);
  auto dst = out.samples();
  const std::size_t stride = static_cast<std::size_t>(out_w) * channels;
  for (int y = 0; y < out_h; ++y) {
    const ResampleTaps& t = ytaps[y];
    double* row = dst.data() + y * stride;
    for (std::size_t k = 0; k < t.index.size(); ++k) {
      const double w = t.weight[k];
      const double* in = mid.data() + t.index[k] * stride;
      for (std::size_t i = 0; i < stride; ++i) row[i] += w * in[i];
    }
    if (spec.clamp) {
      for (std::size_t i = 0; i < stride; ++i) {
        row[i] = std::clamp(row[i], 0.0, 1.0);
      }
    }
  }
  return out;
}

ImageBuffer generate_lr(const ImageBuffer& hr, int factor) {
  if (factor < 1) throw InvalidArgument("degradation factor must be >= 1");
  const int w = hr.width() / factor * factor;
  const int h = hr.height() / factor * factor;
  if (w == 0 || h == 0) {
    throw InvalidArgument("HR image smaller than the degradation factor");
  }
  ResizeSpec spec;
  spec.scale = Ratio{1, factor};
  spec.antialias = true;
  return bicubic_resize(center_crop(hr, w, h), spec);
}

}  // namespace srbench
