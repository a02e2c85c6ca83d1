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

// Raster containers shared by every metric, plus the colour and cropping
// helpers of the evaluation protocol.

#ifndef SRBENCH_IMAGE_H_
#define SRBENCH_IMAGE_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace srbench {

// Row-major, channel-interleaved samples in [0, 1]. Channels is 1 or 3.
class ImageBuffer {
 public:
  ImageBuffer() = default;
  ImageBuffer(int width, int height, int channels, double fill = 0.0);
  ImageBuffer(int width, int height, int channels, std::vector<double> samples);

  int width() const { return width_; }
  int height() const { return height_; }
  int channels() const { return channels_; }
  bool empty() const { return samples_.empty(); }

  std::span<const double> samples() const { return samples_; }
  std::span<double> samples() { return samples_; }

  double at(int x, int y, int c = 0) const {
    return samples_[index(x, y, c)];
  }
  double& at(int x, int y, int c = 0) { return samples_[index(x, y, c)]; }

  bool operator==(const ImageBuffer&) const = default;

 private:
  std::size_t index(int x, int y, int c) const {
    return (static_cast<std::size_t>(y) * width_ + x) * channels_ + c;
  }

  int width_ = 0;
  int height_ = 0;
  int channels_ = 0;
  std::vector<double> samples_;
};

// Single-channel luma, row-major, samples in [0, 1].
class LumaPlane {
 public:
  LumaPlane() = default;
  LumaPlane(int width, int height, double fill = 0.0);
  LumaPlane(int width, int height, std::vector<double> samples);

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t size() const { return samples_.size(); }

  std::span<const double> samples() const { return samples_; }
  std::span<double> samples() { return samples_; }

  double at(int x, int y) const {
    return samples_[static_cast<std::size_t>(y) * width_ + x];
  }
  double& at(int x, int y) {
    return samples_[static_cast<std::size_t>(y) * width_ + x];
  }

  bool operator==(const LumaPlane&) const = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<double> samples_;
};

// BT.601 studio-swing luma: Y = (16 + 65.481 R + 128.553 G + 24.966 B) / 255.
// Throws InvalidArgument for anything but a 3-channel buffer.
LumaPlane rgb_to_luma(const ImageBuffer& rgb);

// rgb_to_luma for colour input, identity for single-channel input.
LumaPlane to_luma(const ImageBuffer& image);

// Interior crop that drops `margin` pixels on every side.
LumaPlane shave_border(const LumaPlane& plane, int margin);

// Rounds to the nearest 8-bit code, half away from zero, after clamping.
std::uint8_t quantize_code(double sample);
std::uint16_t quantize_code16(double sample);

// Replaces every sample with code / 255 where code = quantize_code(sample).
LumaPlane quantize_8bit(const LumaPlane& plane);

// Centred crop to (width, height); the odd leftover pixel is removed from the
// right or bottom edge.
ImageBuffer center_crop(const ImageBuffer& image, int width, int height);

// Splits a buffer into per-channel planes (no colour transform).
LumaPlane channel_plane(const ImageBuffer& image, int channel);

}  // namespace srbench

#endif  // SRBENCH_IMAGE_H_
