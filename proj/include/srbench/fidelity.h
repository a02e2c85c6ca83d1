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

// Full-reference fidelity metrics. Both operate on the 8-bit code scale:
// planes hold samples in [0, 1] and are multiplied by 255 before any
// arithmetic, so `peak` and `dynamic_range` are expressed in code values.

#ifndef SRBENCH_FIDELITY_H_
#define SRBENCH_FIDELITY_H_

#include <limits>

#include "srbench/image.h"

namespace srbench {

// Returned by psnr() when the planes are identical.
inline constexpr double kPsnrIdentical = std::numeric_limits<double>::infinity();

double psnr(const LumaPlane& ref, const LumaPlane& test, double peak = 255.0);

struct SSIMConfig {
  double k1 = 0.01;
  double k2 = 0.03;
  int window_size = 11;
  double window_sigma = 1.5;
  double dynamic_range = 255.0;
};

// Mean of the Gaussian-weighted SSIM map over the valid region (no padding).
double ssim(const LumaPlane& ref, const LumaPlane& test,
            const SSIMConfig& cfg = {});

}  // namespace srbench

#endif  // SRBENCH_FIDELITY_H_
