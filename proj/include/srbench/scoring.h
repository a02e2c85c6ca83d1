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

// Perceptual-score aggregation, per-track ranking and the combined
// leaderboard order.

#ifndef SRBENCH_SCORING_H_
#define SRBENCH_SCORING_H_

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "srbench/errors.h"
#include "srbench/metric.h"

namespace srbench {

// One submission's metric values. psnr may hold +infinity (identical planes);
// every other present value is finite. MUSIQ stays on its 0-100 scale.
class MetricVector {
 public:
  std::optional<double> get(Metric m) const {
    return values_[static_cast<std::size_t>(m)];
  }
  void set(Metric m, double v) { values_[static_cast<std::size_t>(m)] = v; }
  void clear(Metric m) { values_[static_cast<std::size_t>(m)].reset(); }
  bool has(Metric m) const { return get(m).has_value(); }

  bool operator==(const MetricVector&) const = default;

 private:
  std::array<std::optional<double>, kMetricCount> values_{};
};

// The six inputs of the perceptual score.
inline constexpr std::array<Metric, 6> kPerceptualInputs = {
    Metric::kLpips, Metric::kDists, Metric::kNiqe,
    Metric::kManiqa, Metric::kMusiq, Metric::kClipiqa};

struct PerceptualScore {
  double value = 0.0;
  bool operator==(const PerceptualScore&) const = default;
};

class MissingMetric : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

bool has_perceptual_inputs(const MetricVector& m);

// (1 - LPIPS) + (1 - DISTS) + CLIPIQA + MANIQA + MUSIQ / 100
//   + max(0, (10 - NIQE) / 10).
// Throws MissingMetric naming the absent inputs.
PerceptualScore perceptual_score(const MetricVector& m);

// Per-field arithmetic mean. A +infinity PSNR is left out of the mean; the
// result is +infinity only when every image is. Throws InvalidArgument on an
// empty list and when images disagree on which metrics are present.
MetricVector aggregate_submission(std::span<const MetricVector> per_image);

struct LeaderboardEntry {
  std::string team;
  MetricVector metrics;
  std::optional<PerceptualScore> score;
  std::optional<int> rank_track1;
  std::optional<int> rank_track2;
  bool ranked = true;  // late or code-missing teams are listed but unranked

  bool operator==(const LeaderboardEntry&) const = default;
};

enum class Track { kRestoration = 1, kPerceptual = 2 };

// Competition ranks ("1224") over the ranked entries, sorted descending on
// PSNR (track 1) or score (track 2) at full precision. Result is indexed like
// `entries`; unranked entries get nullopt. Throws MissingMetric when a ranked
// entry lacks its key.
std::vector<std::optional<int>> rank_track(
    std::span<const LeaderboardEntry> entries, Track track);

// Fills rank_track1/rank_track2 of every ranked entry.
void assign_ranks(std::span<LeaderboardEntry> entries);

// Orders ranked entries by (min(r1, r2), r1 + r2, team) ascending and appends
// unranked entries in input order. Throws InvalidArgument when a ranked entry
// lacks a rank.
std::vector<LeaderboardEntry> combined_order(
    std::span<const LeaderboardEntry> entries);

}  // namespace srbench

#endif  // SRBENCH_SCORING_H_
