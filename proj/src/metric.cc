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

#include "srbench/metric.h"

namespace srbench {

std::string_view metric_name(Metric m) {
  switch (m) {
    case Metric::kPsnr: return "psnr";
    case Metric::kSsim: return "ssim";
    case Metric::kLpips: return "lpips";
    case Metric::kDists: return "dists";
    case Metric::kNiqe: return "niqe";
    case Metric::kManiqa: return "maniqa";
    case Metric::kMusiq: return "musiq";
    case Metric::kClipiqa: return "clipiqa";
  }
  return "?";
}

std::optional<Metric> parse_metric(std::string_view name) {
  for (Metric m : kAllMetrics) {
    if (metric_name(m) == name) return m;
  }
  return std::nullopt;
}

bool is_full_reference(Metric m) {
  return m == Metric::kPsnr || m == Metric::kSsim || m == Metric::kLpips ||
         m == Metric::kDists;
}

bool is_provider_metric(Metric m) {
  return m == Metric::kLpips || m == Metric::kDists || m == Metric::kManiqa ||
         m == Metric::kMusiq || m == Metric::kClipiqa;
}

}  // namespace srbench
