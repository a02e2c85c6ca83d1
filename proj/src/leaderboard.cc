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

#include "srbench/leaderboard.h"

#include <algorithm>
#include <charconv>

#include "srbench/format.h"

namespace srbench {
namespace {

constexpr std::array<Metric, 8> kColumns = {
    Metric::kPsnr,  Metric::kSsim,   Metric::kLpips, Metric::kDists,
    Metric::kNiqe,  Metric::kManiqa, Metric::kMusiq, Metric::kClipiqa};

std::vector<LeaderboardEntry> order_rows(const std::vector<LeaderboardEntry>& entries) {
  bool both = true;
  for (const LeaderboardEntry& e : entries) {
    if (e.ranked && (!e.rank_track1 || !e.rank_track2)) both = false;
  }
  if (both) return combined_order(entries);

  std::vector<LeaderboardEntry> ranked, unranked;
  for (const LeaderboardEntry& e : entries) (e.ranked ? ranked : unranked).push_back(e);
  auto key = [](const LeaderboardEntry& e) {
    return e.rank_track1 ? *e.rank_track1 : e.rank_track2 ? *e.rank_track2 : INT32_MAX;
  };
  std::stable_sort(ranked.begin(), ranked.end(),
                   [&](const LeaderboardEntry& a, const LeaderboardEntry& b) {
                     if (key(a) != key(b)) return key(a) < key(b);
                     return a.team < b.team;
                   });
  ranked.insert(ranked.end(), unranked.begin(), unranked.end());
  return ranked;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos &&
      (s.empty() || (s.front() != ' ' && s.back() != ' ' && s.front() != '#'))) {
    return s;
  }
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

// Splits CSV text into records of fields; quoted fields may hold commas,
// quotes and newlines. Each record remembers its starting line.
struct CsvRecord {
  std::size_t line = 0;
  std::vector<std::string> fields;
};

std::vector<CsvRecord> split_csv(std::string_view text) {
  std::vector<CsvRecord> records;
  std::size_t line = 1;
  std::size_t i = 0;
  while (i < text.size()) {
    CsvRecord rec{line, {}};
    std::string field;
    bool quoted_field = false;
    for (;;) {
      if (i < text.size() && text[i] == '"' && field.empty() && !quoted_field) {
        quoted_field = true;
        ++i;
        for (;;) {
          if (i >= text.size()) {
            throw InvalidArgument("line " + std::to_string(rec.line) +
                                  ": unterminated quoted field");
          }
          if (text[i] == '"') {
            if (i + 1 < text.size() && text[i + 1] == '"') {
              field += '"';
              i += 2;
              continue;
            }
            ++i;
            break;
          }
          if (text[i] == '\n') ++line;
          field += text[i++];
        }
        continue;
      }
      if (i >= text.size() || text[i] == '\n' || text[i] == '\r' || text[i] == ',') {
        rec.fields.push_back(std::move(field));
        field.clear();
        quoted_field = false;
        if (i < text.size() && text[i] == ',') {
          ++i;
          continue;
        }
        if (i < text.size() && text[i] == '\r') ++i;
        if (i < text.size() && text[i] == '\n') ++i;
        ++line;
        break;
      }
      if (quoted_field) {
        throw InvalidArgument("line " + std::to_string(rec.line) +
                              ": text after closing quote");
      }
      field += text[i++];
    }
    records.push_back(std::move(rec));
  }
  return records;
}

std::string pad_left(const std::string& s, std::size_t width) {
  return s.size() >= width ? s : std::string(width - s.size(), ' ') + s;
}

std::string pad_right(const std::string& s, std::size_t width) {
  return s.size() >= width ? s : s + std::string(width - s.size(), ' ');
}

}  // namespace

Leaderboard build_leaderboard(std::vector<LeaderboardEntry> entries,
                              const LeaderboardOptions& options) {
  if (entries.empty()) throw InvalidArgument("leaderboard needs at least one entry");
  if (!options.track1 && !options.track2) {
    throw InvalidArgument("no track requested");
  }
  for (LeaderboardEntry& e : entries) {
    if (!e.score && has_perceptual_inputs(e.metrics)) e.score = perceptual_score(e.metrics);
    e.rank_track1.reset();
    e.rank_track2.reset();
  }
  if (options.track1) {
    const auto r = rank_track(entries, Track::kRestoration);
    for (std::size_t i = 0; i < entries.size(); ++i) entries[i].rank_track1 = r[i];
  }
  if (options.track2) {
    const auto r = rank_track(entries, Track::kPerceptual);
    for (std::size_t i = 0; i < entries.size(); ++i) entries[i].rank_track2 = r[i];
  }
  return Leaderboard{order_rows(entries)};
}

Leaderboard build_leaderboard(std::span<const EvaluationRecord> records,
                              const LeaderboardOptions& options) {
  std::vector<LeaderboardEntry> entries;
  for (const EvaluationRecord& r : records) {
    LeaderboardEntry e;
    e.team = r.team;
    e.metrics = r.aggregate;
    e.score = r.score;
    e.ranked = r.ranked;
    entries.push_back(std::move(e));
  }
  return build_leaderboard(std::move(entries), options);
}

Leaderboard order_leaderboard(std::vector<LeaderboardEntry> entries) {
  return Leaderboard{order_rows(entries)};
}

std::string render_leaderboard_csv(const Leaderboard& board) {
  std::string out(kLeaderboardHeader);
  out += "\nteam,rank_track1,rank_track2";
  for (Metric m : kColumns) out += "," + std::string(metric_name(m));
  out += ",score\n";
  for (const LeaderboardEntry& e : board.rows) {
    out += csv_field(e.team);
    for (const auto& rank : {e.rank_track1, e.rank_track2}) {
      out += ",";
      if (!e.ranked) {
        out += "N/A";
      } else if (rank) {
        out += std::to_string(*rank);
      }
    }
    for (Metric m : kColumns) {
      out += ",";
      if (auto v = e.metrics.get(m)) out += format_shortest(*v);
    }
    out += ",";
    if (e.score) out += format_shortest(e.score->value);
    out += "\n";
  }
  return out;
}

Leaderboard parse_leaderboard_csv(std::string_view text) {
  const std::vector<CsvRecord> records = split_csv(text);
  auto fail = [](std::size_t line, const std::string& what) -> InvalidArgument {
    return InvalidArgument("line " + std::to_string(line) + ": " + what);
  };
  if (records.empty() || records[0].fields.size() != 1 ||
      records[0].fields[0] != kLeaderboardHeader) {
    throw fail(1, "missing '" + std::string(kLeaderboardHeader) + "' header");
  }
  const std::size_t width = 4 + kColumns.size();
  if (records.size() < 2 || records[1].fields.size() != width ||
      records[1].fields[0] != "team") {
    throw fail(2, "bad column header");
  }
  for (std::size_t c = 0; c < kColumns.size(); ++c) {
    if (records[1].fields[3 + c] != metric_name(kColumns[c])) {
      throw fail(2, "unexpected column '" + records[1].fields[3 + c] + "'");
    }
  }

  Leaderboard board;
  for (std::size_t r = 2; r < records.size(); ++r) {
    const CsvRecord& rec = records[r];
    if (rec.fields.size() == 1 && rec.fields[0].empty()) continue;
    if (rec.fields.size() != width) {
      throw fail(rec.line, "expected " + std::to_string(width) + " fields");
    }
    LeaderboardEntry e;
    e.team = rec.fields[0];
    if (e.team.empty()) throw fail(rec.line, "empty team name");
    const bool na1 = rec.fields[1] == "N/A";
    const bool na2 = rec.fields[2] == "N/A";
    if (na1 != na2) throw fail(rec.line, "N/A must appear in both rank columns");
    e.ranked = !na1;
    if (e.ranked) {
      std::optional<int>* ranks[] = {&e.rank_track1, &e.rank_track2};
      for (int t = 0; t < 2; ++t) {
        const std::string& s = rec.fields[1 + t];
        if (s.empty()) continue;
        int v = 0;
        auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc() || ptr != s.data() + s.size() || v < 1) {
          throw fail(rec.line, "bad rank '" + s + "'");
        }
        *ranks[t] = v;
      }
    }
    for (std::size_t c = 0; c < kColumns.size(); ++c) {
      const std::string& s = rec.fields[3 + c];
      if (s.empty()) continue;
      const auto v = parse_double(s);
      if (!v || std::isnan(*v) || (std::isinf(*v) && kColumns[c] != Metric::kPsnr)) {
        throw fail(rec.line, "bad value '" + s + "' for " +
                                 std::string(metric_name(kColumns[c])));
      }
      e.metrics.set(kColumns[c], *v);
    }
    if (const std::string& s = rec.fields.back(); !s.empty()) {
      const auto v = parse_double(s);
      if (!v || !std::isfinite(*v)) throw fail(rec.line, "bad score '" + s + "'");
      e.score = PerceptualScore{*v};
    }
    board.rows.push_back(std::move(e));
  }
  return board;
}

std::string render_leaderboard_text(const Leaderboard& board) {
  std::vector<std::string> header = {"Team", "Rank T1", "Rank T2", "PSNR",  "SSIM",
                                     "LPIPS", "DISTS",  "NIQE",    "MANIQA", "MUSIQ",
                                     "CLIP-IQA", "Score"};
  std::vector<std::vector<std::string>> cells;
  std::vector<bool> ranked;
  for (const LeaderboardEntry& e : board.rows) {
    std::vector<std::string> row;
    row.push_back(e.team);
    for (const auto& rank : {e.rank_track1, e.rank_track2}) {
      row.push_back(!e.ranked ? "N/A" : rank ? std::to_string(*rank) : "-");
    }
    for (Metric m : kColumns) {
      const auto v = e.metrics.get(m);
      row.push_back(v ? format_fixed(*v, m == Metric::kPsnr ? 2 : 4) : "-");
    }
    row.push_back(e.score ? format_fixed(e.score->value, 4) : "-");
    cells.push_back(std::move(row));
    ranked.push_back(e.ranked);
  }

  std::vector<std::size_t> width(header.size());
  for (std::size_t c = 0; c < header.size(); ++c) {
    width[c] = header[c].size();
    for (const auto& row : cells) width[c] = std::max(width[c], row[c].size());
  }
  auto line = [&](const std::vector<std::string>& row) {
    std::string out = pad_right(row[0], width[0]);
    for (std::size_t c = 1; c < row.size(); ++c) out += "  " + pad_left(row[c], width[c]);
    while (!out.empty() && out.back() == ' ') out.pop_back();
    return out + "\n";
  };
  std::size_t total = width[0];
  for (std::size_t c = 1; c < width.size(); ++c) total += 2 + width[c];

  std::string out = line(header) + std::string(total, '-') + "\n";
  bool rule_done = false;
  for (std::size_t r = 0; r < cells.size(); ++r) {
    if (!ranked[r] && !rule_done) {
      out += std::string(total, '-') + "\n";
      rule_done = true;
    }
    out += line(cells[r]);
  }
  return out;
}

}  // namespace srbench
