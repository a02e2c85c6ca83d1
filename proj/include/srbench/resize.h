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

// Cubic-convolution resampling with the conventions of MATLAB's imresize:
// Keys kernel with a = -0.5, half-pixel centres, edge replication and kernel
// dilation when shrinking with antialiasing on.

#ifndef SRBENCH_RESIZE_H_
#define SRBENCH_RESIZE_H_

#include <vector>

#include "srbench/image.h"

namespace srbench {

// Positive rational output/input size ratio.
struct Ratio {
  int num = 1;
  int den = 1;

  double value() const { return static_cast<double>(num) / den; }
  bool operator==(const Ratio&) const = default;
};

struct ResizeSpec {
  Ratio scale;
  double kernel_sharpness = -0.5;
  bool antialias = true;
  // Clamp output samples to [0, 1]. Only linear probes turn this off.
  bool clamp = true;
};

// Keys cubic kernel W(x) with parameter a.
double cubic_kernel(double x, double a);

// Output length for an input length under `scale`, rounded half away from
// zero. May be zero; bicubic_resize rejects that.
int scaled_length(int length, Ratio scale);

// Taps contributing to one output sample. Indices are already clamped into
// [0, length) and weights sum to one.
struct ResampleTaps {
  std::vector<int> index;
  std::vector<double> weight;
};

std::vector<ResampleTaps> resample_taps(int in_length, int out_length,
                                        const ResizeSpec& spec);

ImageBuffer bicubic_resize(const ImageBuffer& image, const ResizeSpec& spec);

// Crops to a multiple of `factor` (centred) and shrinks by 1/factor with
// antialiasing.
ImageBuffer generate_lr(const ImageBuffer& hr, int factor = 4);

}  // namespace srbench

#endif  // SRBENCH_RESIZE_H_
