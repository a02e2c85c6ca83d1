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

// Separable Gaussian filtering shared by the SSIM and NIQE code paths.

#ifndef SRBENCH_SRC_FILTER_H_
#define SRBENCH_SRC_FILTER_H_

#include <vector>

namespace srbench::internal {

// Normalised 1-D Gaussian taps, centred, `size` odd.
std::vector<double> gaussian_taps(int size, double sigma);

// Correlates a width x height plane with taps ⊗ taps over the valid region
// only. Output is (width - size + 1) x (height - size + 1).
std::vector<double> filter_valid(const std::vector<double>& plane, int width,
                                 int height, const std::vector<double>& taps);

// Same-size correlation with edge replication.
std::vector<double> filter_replicate(const std::vector<double>& plane,
                                     int width, int height,
                                     const std::vector<double>& taps);

}  // namespace srbench::internal

#endif  // SRBENCH_SRC_FILTER_H_
