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

// Leaderboard assembly and its two renderings: a versioned CSV that parses
// back losslessly and an aligned text table for people.

#ifndef SRBENCH_LEADERBOARD_H_
#define SRBENCH_LEADERBOARD_H_

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "srbench/pipeline.h"
#include "srbench/scoring.h"

namespace srbench {

inline constexpr std::string_view kLeaderboardHeader = "# srbench-leaderboard v1";

struct Leaderboard {
  std::vector<LeaderboardEntry> rows;  // display order

  bool operator==(const Leaderboard&) const = default;
};

struct LeaderboardOptions {
  bool track1 = true;
  bool track2 = true;
};

// Ranks the requested tracks over the ranked entries and orders the rows:
// combined order when both tracks are requested, otherwise by the single
// track's rank (team name breaks ties). Unranked entries follow. A missing
// score is derived from the metrics when all six inputs are present. Throws
// MissingMetric when a ranked entry lacks what a requested track needs.
Leaderboard build_leaderboard(std::vector<LeaderboardEntry> entries,
                              const LeaderboardOptions& options = {});
Leaderboard build_leaderboard(std::span<const EvaluationRecord> records,
                              const LeaderboardOptions& options = {});

// Keeps the ranks already on the entries (for example the published ones)
// and only orders the rows.
Leaderboard order_leaderboard(std::vector<LeaderboardEntry> entries);

std::string render_leaderboard_csv(const Leaderboard& board);
// Throws InvalidArgument with the line number on malformed input.
Leaderboard parse_leaderboard_csv(std::string_view text);

// Metrics to 4 decimals, PSNR to 2; ranked rows, then the unranked ones with
// "N/A" ranks below a rule.
std::string render_leaderboard_text(const Leaderboard& board);

}  // namespace srbench

#endif  // SRBENCH_LEADERBOARD_H_
