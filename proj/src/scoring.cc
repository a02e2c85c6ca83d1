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

#include "srbench/scoring.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <tuple>

namespace srbench {

bool has_perceptual_inputs(const MetricVector& m) {
  return std::all_of(kPerceptualInputs.begin(), kPerceptualInputs.end(),
                     [&](Metric k) { return m.has(k); });
}

PerceptualScore perceptual_score(const MetricVector& m) {
  std::string missing;
  for (Metric k : kPerceptualInputs) {
    if (!m.has(k)) {
      if (!missing.empty()) missing += ", ";
      missing += metric_name(k);
    }
  }
  if (!missing.empty()) {
    throw MissingMetric("perceptual score needs: " + missing);
  }
  const double lpips = *m.get(Metric::kLpips);
  const double dists = *m.get(Metric::kDists);
  const double clipiqa = *m.get(Metric::kClipiqa);
  const double maniqa = *m.get(Metric::kManiqa);
  const double musiq = *m.get(Metric::kMusiq);
  const double niqe = *m.get(Metric::kNiqe);
  return {(1.0 - lpips) + (1.0 - dists) + clipiqa + maniqa + musiq / 100.0 +
          std::max(0.0, (10.0 - niqe) / 10.0)};
}

MetricVector aggregate_submission(std::span<const MetricVector> per_image) {
  if (per_image.empty()) {
    throw InvalidArgument("cannot aggregate an empty submission");
  }
  MetricVector out;
  for (Metric m : kAllMetrics) {
    const bool present = per_image.front().has(m);
    for (const MetricVector& v : per_image) {
      if (v.has(m) != present) {
        throw InvalidArgument("metric '" + std::string(metric_name(m)) +
                              "' is present on some images but not others");
      }
    }
    if (!present) continue;
    double sum = 0.0;
    std::size_t n = 0;
    for (const MetricVector& v : per_image) {
      const double x = *v.get(m);
      if (m == Metric::kPsnr && std::isinf(x) && x > 0) continue;
      sum += x;
      ++n;
    }
    out.set(m, n == 0 ? std::numeric_limits<double>::infinity()
                      : sum / static_cast<double>(n));
  }
  return out;
}

std::vector<std::optional<int>> rank_track(
    std::span<const LeaderboardEntry> entries, Track track) {
  std::vector<std::size_t> order;
  std::vector<double> key(entries.size(), 0.0);
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const LeaderboardEntry& e = entries[i];
    if (!e.ranked) continue;
    std::optional<double> k;
    if (track == Track::kRestoration) {
      k = e.metrics.get(Metric::kPsnr);
    } else if (e.score) {
      k = e.score->value;
    }
    if (!k || std::isnan(*k)) {
      throw MissingMetric("team '" + e.team + "' has no " +
                          (track == Track::kRestoration ? "PSNR"
                                                        : "perceptual score") +
                          " to rank");
    }
    key[i] = *k;
    order.push_back(i);
  }
  // The final index tie-break only fixes iteration order; tied keys still
  // share a rank.
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (key[a] != key[b]) return key[a] > key[b];
    return a < b;
  });
  std::vector<std::optional<int>> ranks(entries.size());
  for (std::size_t pos = 0; pos < order.size(); ++pos) {
    const std::size_t i = order[pos];
    if (pos > 0 && key[order[pos - 1]] == key[i]) {
      ranks[i] = ranks[order[pos - 1]];
    } else {
      ranks[i] = static_cast<int>(pos) + 1;
    }
  }
  return ranks;
}

void assign_ranks(std::span<LeaderboardEntry> entries) {
  const auto r1 = rank_track(entries, Track::kRestoration);
  const auto r2 = rank_track(entries, Track::kPerceptual);
  for (std::size_t i = 0; i < entries.size(); ++i) {
    entries[i].rank_track1 = r1[i];
    entries[i].rank_track2 = r2[i];
  }
}

std::vector<LeaderboardEntry> combined_order(
    std::span<const LeaderboardEntry> entries) {
  std::vector<const LeaderboardEntry*> ranked;
  std::vector<const LeaderboardEntry*> unranked;
  for (const LeaderboardEntry& e : entries) {
    if (!e.ranked) {
      unranked.push_back(&e);
      continue;
    }
    if (!e.rank_track1 || !e.rank_track2) {
      throw InvalidArgument("team '" + e.team + "' is missing a track rank");
    }
    ranked.push_back(&e);
  }
  std::sort(ranked.begin(), ranked.end(),
            [](const LeaderboardEntry* a, const LeaderboardEntry* b) {
              const int a1 = *a->rank_track1, a2 = *a->rank_track2;
              const int b1 = *b->rank_track1, b2 = *b->rank_track2;
              // r1 + r2 orders exactly like the average rank.
              using Key = std::tuple<int, int, const std::string&>;
              return Key(std::min(a1, a2), a1 + a2, a->team) <
                     Key(std::min(b1, b2), b1 + b2, b->team);
            });
  std::vector<LeaderboardEntry> out;
  out.reserve(entries.size());
  for (const auto* e : ranked) out.push_back(*e);
  for (const auto* e : unranked) out.push_back(*e);
  return out;
}

}  // namespace srbench
