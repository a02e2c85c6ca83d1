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

#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "srbench/fidelity.h"
#include "srbench/format.h"
#include "srbench/leaderboard.h"
#include "srbench/manifest.h"
#include "srbench/pipeline.h"
#include "srbench/png_io.h"
#include "srbench/resize.h"
#include "test_util.h"

namespace srbench {
namespace {

namespace fs = std::filesystem;
using testing::TempDir;

std::string id4(int i) {
  char buf[8];
  std::snprintf(buf, sizeof(buf), "%04d", i);
  return buf;
}

void write_tiny(const fs::path& dir, const std::vector<std::string>& names) {
  fs::create_directories(dir);
  const ImageBuffer img(4, 4, 1, 0.5);
  for (const std::string& n : names) save_png(img, dir / n);
}

// Crops of the natural fixtures stand in for HR images.
DatasetManifest natural_hr_set(const fs::path& root, int count, int w, int h) {
  const auto sources = testing::natural_images();
  fs::create_directories(root / "HR");
  for (int i = 0; i < count; ++i) {
    const ImageBuffer src = load_png(sources[i % sources.size()]);
    ImageBuffer img = center_crop(src, std::min(w, src.width()), std::min(h, src.height()));
    if (img.channels() == 1) {
      std::vector<double> rgb;
      for (double v : img.samples()) rgb.insert(rgb.end(), {v, v * 0.9, v * 0.8});
      img = ImageBuffer(img.width(), img.height(), 3, std::move(rgb));
    }
    save_png(img, root / "HR" / (id4(i + 1) + ".png"));
  }
  DatasetLayout layout;
  layout.name = "fixture";
  layout.expected_count = count;
  layout.hr_dir = "HR";
  return build_manifest(root, layout);
}

ProviderDescriptor mock(std::vector<std::string> extra = {}) {
  ProviderDescriptor d;
  d.name = "mock";
  d.command = {testing::mock_provider().string()};
  d.command.insert(d.command.end(), extra.begin(), extra.end());
  d.metrics = {Metric::kLpips, Metric::kDists, Metric::kManiqa, Metric::kMusiq,
               Metric::kClipiqa};
  d.timeout_seconds = 10;
  return d;
}

EvaluationOptions quiet(int workers = 1) {
  EvaluationOptions o;
  o.workers = workers;
  o.timestamps = false;
  o.session.shutdown_grace = std::chrono::milliseconds(500);
  return o;
}

// Writes center-cropped HR images as the submission (SR == HR).
void write_identity(const DatasetManifest& m, const fs::path& dir) {
  fs::create_directories(dir);
  for (const ManifestEntry& e : m.entries) {
    const ImageBuffer hr = load_png(*e.hr);
    save_png(center_crop(hr, hr.width() / 4 * 4, hr.height() / 4 * 4), dir / (e.id + ".png"));
  }
}

TEST(Presets, SplitCountsAndIds) {
  const auto t = preset_layout("div2k-train");
  const auto v = preset_layout("div2k-val");
  const auto s = preset_layout("div2k-test");
  ASSERT_TRUE(t && v && s);
  EXPECT_EQ(t->expected_count, 800u);
  EXPECT_EQ(v->expected_count, 100u);
  EXPECT_EQ(s->expected_count, 100u);
  EXPECT_EQ(t->expected_ids.front(), "0001");
  EXPECT_EQ(v->expected_ids.front(), "0801");
  EXPECT_EQ(s->expected_ids.back(), "1000");
  EXPECT_EQ(preset_layout("flickr2k")->expected_count, 2650u);
  EXPECT_EQ(preset_layout("lsdir-train")->expected_count, 84991u);
  EXPECT_EQ(preset_layout("lsdir-val")->expected_count, 1000u);
  EXPECT_EQ(preset_layout("lsdir-test")->expected_count, 1000u);
  EXPECT_FALSE(preset_layout("div2k").has_value());
  for (const std::string& name : preset_names()) EXPECT_TRUE(preset_layout(name)) << name;
}

TEST(BuildManifest, Div2kTrainTree) {
  TempDir root;
  std::vector<std::string> names;
  for (int i = 1; i <= 800; ++i) names.push_back(id4(i) + ".png");
  write_tiny(root / "DIV2K_train_HR", names);
  const DatasetManifest m = build_manifest(root.path(), *preset_layout("div2k-train"));
  EXPECT_EQ(m.entries.size(), 800u);
  EXPECT_EQ(m.split, Split::kTrain);
  EXPECT_EQ(m.entries.front().id, "0001");
  EXPECT_TRUE(m.entries.front().hr.has_value());
  EXPECT_FALSE(m.entries.front().lr.has_value());
}

TEST(BuildManifest, MissingFileIsNamed) {
  TempDir root;
  std::vector<std::string> hr, lr;
  for (int i = 901; i <= 1000; ++i) {
    if (i != 950) hr.push_back(id4(i) + ".png");
    lr.push_back(id4(i) + "x4.png");
  }
  write_tiny(root / "DIV2K_test_HR", hr);
  write_tiny(root / "DIV2K_test_LR_bicubic" / "X4", lr);
  try {
    build_manifest(root.path(), *preset_layout("div2k-test"));
    FAIL();
  } catch (const ManifestError& e) {
    EXPECT_EQ(e.missing(), std::vector<std::string>{"0950"});
    EXPECT_NE(std::string(e.what()).find("0950"), std::string::npos);
  }
}

TEST(BuildManifest, ExtraFileIsNamed) {
  TempDir root;
  std::vector<std::string> lr;
  for (int i = 801; i <= 900; ++i) lr.push_back(id4(i) + "x4.png");
  lr.push_back("0042x4.png");
  write_tiny(root / "DIV2K_valid_LR_bicubic" / "X4", lr);
  try {
    build_manifest(root.path(), *preset_layout("div2k-val"));
    FAIL();
  } catch (const ManifestError& e) {
    EXPECT_EQ(e.extra(), std::vector<std::string>{"0042"});
  }
}

TEST(BuildManifest, CustomLayout) {
  TempDir root;
  std::vector<std::string> names;
  for (int i = 0; i < 10; ++i) names.push_back("img" + std::to_string(i) + ".png");
  write_tiny(root / "hr", names);
  DatasetLayout l;
  l.name = "mine";
  l.expected_count = 10;
  l.hr_dir = "hr";
  EXPECT_EQ(build_manifest(root.path(), l).entries.size(), 10u);
  l.expected_count = 11;
  EXPECT_THROW(build_manifest(root.path(), l), ManifestError);
}

TEST(BuildManifest, DuplicateIds) {
  TempDir root;
  write_tiny(root / "hr", {"a.png", "a.PNG", "b.png"});
  DatasetLayout l;
  l.name = "dup";
  l.expected_count = 2;
  l.hr_dir = "hr";
  EXPECT_THROW(build_manifest(root.path(), l), ManifestError);
}

TEST(BuildManifest, MissingTree) {
  TempDir root;
  EXPECT_THROW(build_manifest(root.path(), *preset_layout("div2k-test")), ManifestError);
}

TEST(Manifest, SaveLoadRoundTripWithRelativePaths) {
  TempDir root;
  const DatasetManifest m = natural_hr_set(root.path(), 3, 64, 48);
  save_manifest(m, root / "m.json", root.path());
  EXPECT_EQ(testing::read_bytes(root / "m.json").find(root.path().string()), std::string::npos);
  EXPECT_EQ(load_manifest(root / "m.json", root.path()), m);
  EXPECT_THROW(load_manifest(root / "nope.json"), FileNotFound);
  testing::write_bytes(root / "bad.json", "{\"format\":\"x\"}");
  EXPECT_THROW(load_manifest(root / "bad.json"), CorruptStream);
}

TEST(GenerateLrSet, SizesAndCropping) {
  TempDir root;
  fs::create_directories(root / "HR");
  save_png(testing::random_codes(2040, 1080, 3, 1), root / "HR" / "a.png");
  save_png(testing::random_codes(2043, 1080, 3, 2), root / "HR" / "b.png");
  DatasetLayout l;
  l.name = "sizes";
  l.expected_count = 2;
  l.hr_dir = "HR";
  const DatasetManifest m = generate_lr_set(build_manifest(root.path(), l), root / "LR", 1);
  for (const ManifestEntry& e : m.entries) {
    ASSERT_TRUE(e.lr.has_value());
    const PngInfo info = read_png_info(*e.lr);
    EXPECT_EQ(info.width, 510);
    EXPECT_EQ(info.height, 270);
  }
  EXPECT_EQ(m.entries[1].lr->filename(), "bx4.png");
  EXPECT_EQ(load_png(*m.entries[1].lr),
            load_png(root / "LR" / "bx4.png"));
}

TEST(GenerateLrSet, ByteIdenticalAcrossRunsAndWorkerCounts) {
  TempDir root;
  const DatasetManifest m = natural_hr_set(root.path(), 4, 200, 160);
  generate_lr_set(m, root / "one", 1);
  generate_lr_set(m, root / "two", 3);
  for (const ManifestEntry& e : m.entries) {
    const std::string name = e.id + "x4.png";
    EXPECT_EQ(testing::read_bytes(root / "one" / name), testing::read_bytes(root / "two" / name));
  }
}

TEST(GenerateLrSet, NeedsHr) {
  DatasetManifest m;
  m.entries.push_back({"x", std::nullopt, fs::path("x.png")});
  TempDir dir;
  EXPECT_THROW(generate_lr_set(m, dir / "out"), InvalidArgument);
}

class SubmissionTest : public ::testing::Test {
 protected:
  void SetUp() override {
    manifest_ = generate_lr_set(natural_hr_set(root_.path(), 4, 230, 198), root_ / "LR", 1);
    write_bicubic_submission(manifest_, root_ / "bicubic", 1);
  }

  SubmissionBundle bundle(const fs::path& dir, const std::string& team = "team") {
    return scan_submission(dir, team, Track::kPerceptual);
  }

  TempDir root_;
  DatasetManifest manifest_;
};

TEST_F(SubmissionTest, GeneratedUpsampleAlwaysValidates) {
  const ValidationReport r = validate_submission(bundle(root_ / "bicubic"), manifest_);
  EXPECT_TRUE(r.pass());
  EXPECT_EQ(r.checked, 4u);
  const PngInfo sr = read_png_info(root_ / "bicubic" / "0001.png");
  EXPECT_EQ(sr.width, 228);
  EXPECT_EQ(sr.height, 196);
}

TEST_F(SubmissionTest, ReportsEachDefectKind) {
  const fs::path dir = root_ / "bicubic";
  fs::remove(dir / "0002.png");
  save_png(ImageBuffer(114, 98, 3), dir / "0003.png");
  testing::write_bytes(dir / "0004.png", "garbage");
  save_png(ImageBuffer(4, 4, 3), dir / "9999.png");
  const ValidationReport r = validate_submission(bundle(dir), manifest_);
  ASSERT_EQ(r.defects.size(), 4u);
  EXPECT_EQ(r.defects[0].id, "0002");
  EXPECT_EQ(r.defects[0].kind, DefectKind::kMissing);
  EXPECT_EQ(r.defects[1].kind, DefectKind::kDimensionMismatch);
  EXPECT_EQ(r.defects[2].kind, DefectKind::kUndecodable);
  EXPECT_EQ(r.defects[3].id, "9999");
  EXPECT_EQ(r.defects[3].kind, DefectKind::kExtra);
  EXPECT_FALSE(r.pass());
}

TEST_F(SubmissionTest, IdentitySubmission) {
  write_identity(manifest_, root_ / "identity");
  const EvaluationRecord r =
      evaluate_submission(bundle(root_ / "identity"), manifest_, {mock()}, quiet());
  ASSERT_EQ(r.per_image.size(), manifest_.entries.size());
  for (const ManifestEntry& e : manifest_.entries) {
    const MetricVector& v = r.per_image.at(e.id);
    EXPECT_EQ(v.get(Metric::kPsnr), kPsnrIdentical);
    EXPECT_EQ(v.get(Metric::kSsim), 1.0);
    EXPECT_EQ(v.get(Metric::kLpips), 0.2113);
    EXPECT_EQ(v.get(Metric::kMusiq), 71.4919);
  }
  EXPECT_EQ(r.aggregate.get(Metric::kPsnr), kPsnrIdentical);
  EXPECT_EQ(r.aggregate.get(Metric::kSsim), 1.0);
  ASSERT_TRUE(r.score.has_value());
  EXPECT_EQ(r.score->value, perceptual_score(r.aggregate).value);
  EXPECT_EQ(r.provider_meta.at("lpips")["checkpoint"], "mock-lpips");
  EXPECT_TRUE(r.unavailable.empty());
  EXPECT_FALSE(r.started_at.has_value());
}

TEST_F(SubmissionTest, BicubicIsWorseThanIdentity) {
  write_identity(manifest_, root_ / "identity");
  EvaluationOptions o = quiet();
  o.allow_partial = true;
  const EvaluationRecord id = evaluate_submission(bundle(root_ / "identity"), manifest_, {}, o);
  const EvaluationRecord bi = evaluate_submission(bundle(root_ / "bicubic"), manifest_, {}, o);
  const double p = *bi.aggregate.get(Metric::kPsnr);
  EXPECT_TRUE(std::isfinite(p));
  EXPECT_LT(p, *id.aggregate.get(Metric::kPsnr));
  EXPECT_LT(*bi.aggregate.get(Metric::kSsim), 1.0);
}

TEST_F(SubmissionTest, PartialModeWithoutProviders) {
  EvaluationOptions o = quiet();
  EXPECT_THROW(evaluate_submission(bundle(root_ / "bicubic"), manifest_, {}, o),
               EvaluationFailed);
  o.allow_partial = true;
  const EvaluationRecord r = evaluate_submission(bundle(root_ / "bicubic"), manifest_, {}, o);
  EXPECT_TRUE(r.aggregate.has(Metric::kPsnr));
  EXPECT_TRUE(r.aggregate.has(Metric::kSsim));
  EXPECT_TRUE(r.aggregate.has(Metric::kNiqe));
  EXPECT_FALSE(r.aggregate.has(Metric::kLpips));
  EXPECT_FALSE(r.score.has_value());
  EXPECT_EQ(r.unavailable.size(), 5u);
}

TEST_F(SubmissionTest, ProviderCrashMidRun) {
  const ProviderDescriptor crashy = mock({"--fault", "crash", "--fault-at", "12"});
  EXPECT_THROW(evaluate_submission(bundle(root_ / "bicubic"), manifest_, {crashy}, quiet()),
               EvaluationFailed);

  EvaluationOptions o = quiet();
  o.allow_partial = true;
  const EvaluationRecord r =
      evaluate_submission(bundle(root_ / "bicubic"), manifest_, {crashy}, o);
  // Two images (10 requests) finished before the crash; their values stand.
  EXPECT_EQ(r.per_image.at("0001").get(Metric::kLpips), 0.2113);
  EXPECT_EQ(r.per_image.at("0002").get(Metric::kClipiqa), 0.7543);
  EXPECT_FALSE(r.aggregate.has(Metric::kLpips));
  EXPECT_FALSE(r.score.has_value());
  EXPECT_EQ(r.unavailable.size(), 5u);
  EXPECT_TRUE(r.aggregate.has(Metric::kNiqe));
}

TEST_F(SubmissionTest, InvalidSubmissionIsRejected) {
  fs::remove(root_ / "bicubic" / "0001.png");
  EXPECT_THROW(evaluate_submission(bundle(root_ / "bicubic"), manifest_, {mock()}, quiet()),
               EvaluationFailed);
}

TEST_F(SubmissionTest, NativeMetricsAreDeterministic) {
  EvaluationOptions o = quiet(1);
  o.allow_partial = true;
  const EvaluationRecord a = evaluate_submission(bundle(root_ / "bicubic"), manifest_, {}, o);
  o.workers = 3;
  const EvaluationRecord b = evaluate_submission(bundle(root_ / "bicubic"), manifest_, {}, o);
  EXPECT_EQ(a, b);
}

TEST_F(SubmissionTest, RecordRoundTrip) {
  write_identity(manifest_, root_ / "identity");
  EvaluationOptions o = quiet();
  o.timestamps = true;
  const EvaluationRecord r =
      evaluate_submission(bundle(root_ / "identity"), manifest_, {mock()}, o);
  ASSERT_TRUE(r.started_at.has_value());
  save_record(r, root_ / "records" / "team.json");
  EXPECT_EQ(load_record(root_ / "records" / "team.json"), r);
  const std::string text = testing::read_bytes(root_ / "records" / "team.json");
  EXPECT_NE(text.find("\"psnr\": \"inf\""), std::string::npos);
  EXPECT_NE(text.find("\"format\": \"srbench-record\""), std::string::npos);
}

TEST(Record, RejectsForeignDocuments) {
  TempDir dir;
  testing::write_bytes(dir / "r.json", "{\"format\":\"other\",\"version\":1}");
  EXPECT_THROW(load_record(dir / "r.json"), CorruptStream);
  testing::write_bytes(dir / "s.json", "{");
  EXPECT_THROW(load_record(dir / "s.json"), CorruptStream);
}

TEST(Format, FixedRoundsHalfAwayFromZero) {
  EXPECT_EQ(format_fixed(4.34725, 4), "4.3473");
  EXPECT_EQ(format_fixed(4.347269, 4), "4.3473");
  EXPECT_EQ(format_fixed(31.145, 2), "31.15");
  EXPECT_EQ(format_fixed(0.125, 2), "0.13");
  EXPECT_EQ(format_fixed(-0.125, 2), "-0.13");
  EXPECT_EQ(format_fixed(9.99995, 4), "10.0000");
  EXPECT_EQ(format_fixed(-0.00001, 4), "0.0000");
  EXPECT_EQ(format_fixed(3.0, 2), "3.00");
  EXPECT_EQ(format_fixed(12.5, 0), "13");
  EXPECT_EQ(format_fixed(1e-20, 4), "0.0000");
  EXPECT_EQ(format_fixed(INFINITY, 2), "inf");
}

TEST(Format, ShortestRoundTrips) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-100, 100);
  for (int i = 0; i < 1000; ++i) {
    const double v = u(rng);
    EXPECT_EQ(parse_double(format_shortest(v)), v);
  }
  EXPECT_EQ(format_shortest(0.2113), "0.2113");
  EXPECT_EQ(parse_double("inf"), INFINITY);
  EXPECT_FALSE(parse_double("1.5x").has_value());
  EXPECT_FALSE(parse_double("").has_value());
}

std::vector<LeaderboardEntry> published_board() {
  std::ifstream in(testing::repo_data_dir() / "published_leaderboard.csv");
  std::stringstream s;
  s << in.rdbuf();
  return parse_leaderboard_csv(s.str()).rows;
}

TEST(Leaderboard, PublishedRanksGiveTheTableOrder) {
  const auto rows = published_board();
  ASSERT_EQ(rows.size(), 26u);
  const Leaderboard b = order_leaderboard({rows.rbegin(), rows.rend()});
  for (std::size_t i = 0; i < 24; ++i) EXPECT_EQ(b.rows[i].team, rows[i].team) << i;
  EXPECT_FALSE(b.rows[24].ranked);
  EXPECT_FALSE(b.rows[25].ranked);
}

TEST(Leaderboard, RecomputedTrackTwoMatchesThePublishedColumn) {
  const auto rows = published_board();
  const Leaderboard b = build_leaderboard(rows);
  for (const LeaderboardEntry& got : b.rows) {
    const auto want = std::find_if(rows.begin(), rows.end(),
                                   [&](const auto& r) { return r.team == got.team; });
    EXPECT_EQ(got.rank_track2, want->rank_track2) << got.team;
  }
}

TEST(Leaderboard, SingleRecordRanksFirstTwice) {
  EvaluationRecord r;
  r.team = "solo";
  r.aggregate.set(Metric::kPsnr, 28.0);
  for (Metric m : kPerceptualInputs) r.aggregate.set(m, 0.5);
  const Leaderboard b = build_leaderboard(std::vector<EvaluationRecord>{r});
  ASSERT_EQ(b.rows.size(), 1u);
  EXPECT_EQ(b.rows[0].rank_track1, 1);
  EXPECT_EQ(b.rows[0].rank_track2, 1);
  EXPECT_TRUE(b.rows[0].score.has_value());
}

TEST(Leaderboard, UnrankedRecordsTrailWithNa) {
  std::vector<EvaluationRecord> recs(2);
  recs[0].team = "late";
  recs[0].ranked = false;
  recs[1].team = "ontime";
  for (auto& r : recs) {
    r.aggregate.set(Metric::kPsnr, 30.0);
    for (Metric m : kPerceptualInputs) r.aggregate.set(m, 0.5);
  }
  const Leaderboard b = build_leaderboard(recs);
  EXPECT_EQ(b.rows[0].team, "ontime");
  EXPECT_EQ(b.rows[1].team, "late");
  EXPECT_NE(render_leaderboard_csv(b).find("late,N/A,N/A"), std::string::npos);
  const std::string text = render_leaderboard_text(b);
  EXPECT_NE(text.find("N/A"), std::string::npos);
}

TEST(Leaderboard, MissingTrackMetricIsAnError) {
  std::vector<LeaderboardEntry> e(1);
  e[0].team = "partial";
  e[0].metrics.set(Metric::kPsnr, 30.0);
  EXPECT_THROW(build_leaderboard(e), MissingMetric);
  LeaderboardOptions only_t1;
  only_t1.track2 = false;
  const Leaderboard b = build_leaderboard(e, only_t1);
  EXPECT_EQ(b.rows[0].rank_track1, 1);
  EXPECT_FALSE(b.rows[0].rank_track2.has_value());
  EXPECT_THROW(build_leaderboard(std::vector<LeaderboardEntry>{}), InvalidArgument);
}

TEST(Leaderboard, CsvRoundTrip) {
  Leaderboard b = order_leaderboard(published_board());
  b.rows[0].team = "Comma, \"Quoted\" Team";
  b.rows[1].metrics.set(Metric::kPsnr, INFINITY);
  b.rows[2].metrics.set(Metric::kSsim, 0.1 + 0.2);
  b.rows[3].score.reset();
  b.rows[4].metrics.clear(Metric::kNiqe);
  const std::string csv = render_leaderboard_csv(b);
  EXPECT_EQ(csv.rfind(kLeaderboardHeader, 0), 0u);
  EXPECT_EQ(parse_leaderboard_csv(csv), b);
  EXPECT_EQ(render_leaderboard_csv(parse_leaderboard_csv(csv)), csv);
}

TEST(Leaderboard, CsvParserRejectsDamage) {
  EXPECT_THROW(parse_leaderboard_csv("team,rank_track1\n"), InvalidArgument);
  const std::string head = std::string(kLeaderboardHeader) +
                           "\nteam,rank_track1,rank_track2,psnr,ssim,lpips,dists,niqe,"
                           "maniqa,musiq,clipiqa,score\n";
  EXPECT_NO_THROW(parse_leaderboard_csv(head));
  EXPECT_THROW(parse_leaderboard_csv(head + "a,1,2,x,,,,,,,,\n"), InvalidArgument);
  EXPECT_THROW(parse_leaderboard_csv(head + "a,1,N/A,,,,,,,,,\n"), InvalidArgument);
  EXPECT_THROW(parse_leaderboard_csv(head + "a,1,2\n"), InvalidArgument);
  EXPECT_THROW(parse_leaderboard_csv(head + "\"a,1,2,,,,,,,,,\n"), InvalidArgument);
}

TEST(Leaderboard, TextTableUsesDisplayPrecision) {
  const std::string text = render_leaderboard_text(order_leaderboard(published_board()));
  std::istringstream lines(text);
  std::string header, rule, first;
  std::getline(lines, header);
  std::getline(lines, rule);
  std::getline(lines, first);
  EXPECT_NE(header.find("CLIP-IQA"), std::string::npos);
  EXPECT_EQ(first.rfind("SamsungAICamera", 0), 0u);
  EXPECT_NE(first.find(" 33.46 "), std::string::npos);
  EXPECT_NE(first.find(" 0.0929 "), std::string::npos);
  EXPECT_NE(first.find(" 62.1058 "), std::string::npos);
  EXPECT_NE(text.find("IPCV_Team"), std::string::npos);
}

}  // namespace
}  // namespace srbench
