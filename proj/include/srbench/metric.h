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

#ifndef SRBENCH_METRIC_H_
#define SRBENCH_METRIC_H_

#include <array>
#include <optional>
#include <string>
#include <string_view>

namespace srbench {

enum class Metric {
  kPsnr,
  kSsim,
  kLpips,
  kDists,
  kNiqe,
  kManiqa,
  kMusiq,
  kClipiqa,
};

inline constexpr std::size_t kMetricCount = 8;

inline constexpr std::array<Metric, kMetricCount> kAllMetrics = {
    Metric::kPsnr,  Metric::kSsim,   Metric::kLpips, Metric::kDists,
    Metric::kNiqe,  Metric::kManiqa, Metric::kMusiq, Metric::kClipiqa};

// Lower-case canonical name ("psnr", "clipiqa", ...).
std::string_view metric_name(Metric m);
std::optional<Metric> parse_metric(std::string_view name);

// LPIPS and DISTS need the ground truth image.
bool is_full_reference(Metric m);

// Metrics served by external providers rather than computed natively.
bool is_provider_metric(Metric m);

}  // namespace srbench

#endif  // SRBENCH_METRIC_H_
