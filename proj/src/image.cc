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

#include "srbench/image.h"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "srbench/errors.h"

namespace srbench {
namespace {

void check_dims(int width, int height) {
  if (width <= 0 || height <= 0) {
    throw InvalidArgument("image dimensions must be positive, got " +
                          std::to_string(width) + "x" + std::to_string(height));
  }
}

}  // namespace

ImageBuffer::ImageBuffer(int width, int height, int channels, double fill)
    : width_(width), height_(height), channels_(channels) {
  check_dims(width, height);
  if (channels != 1 && channels != 3) {
    throw InvalidArgument("channels must be 1 or 3, got " +
                          std::to_string(channels));
  }
  samples_.assign(static_cast<std::size_t>(width) * height * channels, fill);
}

ImageBuffer::ImageBuffer(int width, int height, int channels,
                         std::vector<double> samples)
    : ImageBuffer(width, height, channels) {
  if (samples.size() != samples_.size()) {
    throw InvalidArgument("sample count " + std::to_string(samples.size()) +
                          " does not match " + std::to_string(samples_.size()));
  }
  samples_ = std::move(samples);
}

LumaPlane::LumaPlane(int width, int height, double fill)
    : width_(width), height_(height) {
  check_dims(width, height);
  samples_.assign(static_cast<std::size_t>(width) * height, fill);
}

LumaPlane::LumaPlane(int width, int height, std::vector<double> samples)
    : LumaPlane(width, height) {
  if (samples.size() != samples_.size()) {
    throw InvalidArgument("sample count " + std::to_string(samples.size()) +
                          " does not match " + std::to_string(samples_.size()));
  }
  samples_ = std::move(samples);
}

LumaPlane rgb_to_luma(const ImageBuffer& rgb) {
  if (rgb.channels() != 3) {
    throw InvalidArgument("rgb_to_luma needs a 3-channel buffer");
  }
  LumaPlane out(rgb.width(), rgb.height());
  auto src = rgb.samples();
  auto dst = out.samples();
  for (std::size_t i = 0; i < dst.size(); ++i) {
    const double r = src[3 * i];
    const double g = src[3 * i + 1];
    const double b = src[3 * i + 2];
    const double y = (16.0 + 65.481 * r + 128.553 * g + 24.966 * b) / 255.0;
    dst[i] = std::clamp(y, 0.0, 1.0);
  }
  return out;
}

LumaPlane to_luma(const ImageBuffer& image) {
  if (image.channels() == 3) return rgb_to_luma(image);
  return LumaPlane(image.width(), image.height(),
                   std::vector<double>(image.samples().begin(),
                                       image.samples().end()));
}

LumaPlane shave_border(const LumaPlane& plane, int margin) {
  if (margin < 0) throw InvalidArgument("shave margin must be nonnegative");
  if (plane.width() <= 2 * margin || plane.height() <= 2 * margin) {
    throw InvalidArgument("shave margin " + std::to_string(margin) +
                          " too large for " + std::to_string(plane.width()) +
                          "x" + std::to_string(plane.height()) + " plane");
  }
  if (margin == 0) return plane;
  LumaPlane out(plane.width() - 2 * margin, plane.height() - 2 * margin);
  for (int y = 0; y < out.height(); ++y) {
    for (int x = 0; x < out.width(); ++x) {
      out.at(x, y) = plane.at(x + margin, y + margin);
    }
  }
  return out;
}

std::uint8_t quantize_code(double sample) {
  const double v = std::clamp(sample, 0.0, 1.0) * 255.0;
  return static_cast<std::uint8_t>(std::floor(v + 0.5));
}

std::uint16_t quantize_code16(double sample) {
  const double v = std::clamp(sample, 0.0, 1.0) * 65535.0;
  return static_cast<std::uint16_t>(std::floor(v + 0.5));
}

LumaPlane quantize_8bit(const LumaPlane& plane) {
  LumaPlane out = plane;
  for (double& s : out.samples()) s = quantize_code(s) / 255.0;
  return out;
}

ImageBuffer center_crop(const ImageBuffer& image, int width, int height) {
  if (width > image.width() || height > image.height()) {
    throw InvalidArgument("crop larger than image");
  }
  if (width == image.width() && height == image.height()) return image;
  const int x0 = (image.width() - width) / 2;
  const int y0 = (image.height() - height) / 2;
  ImageBuffer out(width, height, image.channels());
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      for (int c = 0; c < image.channels(); ++c) {
        out.at(x, y, c) = image.at(x + x0, y + y0, c);
      }
    }
  }
  return out;
}

LumaPlane channel_plane(const ImageBuffer& image, int channel) {
  if (channel < 0 || channel >= image.channels()) {
    throw InvalidArgument("channel index out of range");
  }
  LumaPlane out(image.width(), image.height());
  for (int y = 0; y < image.height(); ++y) {
    for (int x = 0; x < image.width(); ++x) {
      out.at(x, y) = image.at(x, y, channel);
    }
  }
  return out;
}

}  // namespace srbench
