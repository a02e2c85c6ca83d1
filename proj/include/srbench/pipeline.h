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

// LR-set generation, submission validation and end-to-end evaluation.

#ifndef SRBENCH_PIPELINE_H_
#define SRBENCH_PIPELINE_H_

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "srbench/manifest.h"
#include "srbench/niqe.h"
#include "srbench/provider.h"
#include "srbench/scoring.h"

namespace srbench {

inline constexpr int kSrScale = 4;

// Worker bound used when a caller passes 0: the logical core count.
int default_worker_count();

// Writes <out_dir>/<id>x4.png for every entry with an HR path and returns the
// manifest with LR paths pointing there. Output bytes depend only on the HR
// pixels.
DatasetManifest generate_lr_set(const DatasetManifest& manifest,
                                const std::filesystem::path& out_dir,
                                int workers = 0);

// Bicubic x4 upscale of every LR entry, written as <out_dir>/<id>.png. This is
// the reference "no network" submission.
void write_bicubic_submission(const DatasetManifest& manifest,
                              const std::filesystem::path& out_dir,
                              int workers = 0);

struct SubmissionBundle {
  std::string team;
  Track track = Track::kPerceptual;
  std::filesystem::path directory;
  std::vector<std::string> image_ids;  // stems of the PNG files present
};

// Collects the PNG stems of `directory`.
SubmissionBundle scan_submission(const std::filesystem::path& directory,
                                 std::string team, Track track);

enum class DefectKind { kMissing, kExtra, kUndecodable, kDimensionMismatch };

std::string_view defect_kind_name(DefectKind k);

struct Defect {
  std::string id;
  DefectKind kind;
  std::string detail;
};

struct ValidationReport {
  std::vector<Defect> defects;  // ordered by id, then kind
  std::size_t checked = 0;

  bool pass() const { return defects.empty(); }
};

// One <id>.png per manifest id, decodable, and exactly 4x the LR size (the
// cropped HR size when the entry has no LR).
ValidationReport validate_submission(const SubmissionBundle& bundle,
                                     const DatasetManifest& manifest,
                                     int workers = 0);

struct ProtocolConfig {
  int shave = 4;
  bool quantize_luma = true;
  // Feed NIQE and the providers the shaved luma plane instead of the full
  // SR image.
  bool perceptual_on_shaved_luma = false;

  void validate() const;
  bool operator==(const ProtocolConfig&) const = default;
};

struct EvaluationOptions {
  ProtocolConfig protocol;
  int workers = 0;
  bool allow_partial = false;
  bool timestamps = true;
  const NIQEModel* niqe_model = nullptr;     // default model when null
  std::filesystem::path scratch_dir;         // temp files; system temp when empty
  SessionOptions session;
};

struct EvaluationRecord {
  std::string team;
  Track track = Track::kPerceptual;
  bool ranked = true;
  std::string dataset;  // "<name>/<split>"
  ProtocolConfig protocol;
  std::map<std::string, MetricVector> per_image;
  MetricVector aggregate;
  std::optional<PerceptualScore> score;
  std::vector<Metric> unavailable;  // requested but not delivered everywhere
  std::map<std::string, nlohmann::json> provider_meta;  // keyed by metric name
  std::optional<std::string> started_at;
  std::optional<std::string> finished_at;

  bool operator==(const EvaluationRecord&) const = default;
};

class EvaluationFailed : public Error {
 public:
  using Error::Error;
};

// PSNR and SSIM on the shaved (optionally quantized) luma of SR against the
// HR centre-cropped to the SR size; NIQE natively; the remaining metrics via
// providers. A provider failure aborts with EvaluationFailed unless
// allow_partial, in which case the metric is listed as unavailable and kept
// out of the aggregate. Values already recorded are never rewritten.
EvaluationRecord evaluate_submission(
    const SubmissionBundle& bundle, const DatasetManifest& manifest,
    const std::vector<ProviderDescriptor>& providers,
    const EvaluationOptions& options = {});

nlohmann::ordered_json record_to_json(const EvaluationRecord& record);
EvaluationRecord record_from_json(const nlohmann::json& doc);
void save_record(const EvaluationRecord& record, const std::filesystem::path& path);
EvaluationRecord load_record(const std::filesystem::path& path);

}  // namespace srbench

#endif  // SRBENCH_PIPELINE_H_
