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

#include "srbench/pipeline.h"

#include <stdlib.h>
#include <time.h>

#include <algorithm>
#include <fstream>
#include <mutex>
#include <set>
#include <thread>

#include "parallel.h"
#include "srbench/fidelity.h"
#include "srbench/format.h"
#include "srbench/image.h"
#include "srbench/png_io.h"
#include "srbench/resize.h"

namespace srbench {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

int resolve_workers(int workers) { return workers > 0 ? workers : default_worker_count(); }

void ensure_directory(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw WriteFailed(dir, "cannot create directory");
}

std::string utc_now() {
  const std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// RAII scratch directory for cropped references and luma renderings.
class ScratchDir {
 public:
  explicit ScratchDir(const fs::path& parent) {
    const fs::path base = parent.empty() ? fs::temp_directory_path() : parent;
    ensure_directory(base);
    std::string templ = (base / "srbench-eval-XXXXXX").string();
    if (mkdtemp(templ.data()) == nullptr) throw WriteFailed(base, "mkdtemp failed");
    path_ = templ;
  }
  ~ScratchDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  ScratchDir(const ScratchDir&) = delete;
  ScratchDir& operator=(const ScratchDir&) = delete;
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

ImageBuffer luma_image(const LumaPlane& p) {
  return ImageBuffer(p.width(), p.height(), 1,
                     std::vector<double>(p.samples().begin(), p.samples().end()));
}

std::string summarize(const ValidationReport& report) {
  std::string out = std::to_string(report.defects.size()) + " submission defect(s)";
  for (std::size_t i = 0; i < report.defects.size() && i < 5; ++i) {
    const Defect& d = report.defects[i];
    out += "; " + d.id + ": " + std::string(defect_kind_name(d.kind));
  }
  return out;
}

ordered_json metrics_to_json(const MetricVector& v) {
  ordered_json j = ordered_json::object();
  for (Metric m : kAllMetrics) {
    if (auto x = v.get(m)) {
      if (std::isfinite(*x)) {
        j[std::string(metric_name(m))] = *x;
      } else {
        j[std::string(metric_name(m))] = format_shortest(*x);
      }
    }
  }
  return j;
}

MetricVector metrics_from_json(const json& j) {
  MetricVector v;
  for (const auto& [key, value] : j.items()) {
    const auto m = parse_metric(key);
    if (!m) throw InvalidArgument("unknown metric '" + key + "'");
    if (value.is_number()) {
      v.set(*m, value.get<double>());
    } else if (value.is_string() && *m == Metric::kPsnr && value == "inf") {
      v.set(*m, kPsnrIdentical);
    } else {
      throw InvalidArgument("bad value for metric '" + key + "'");
    }
  }
  return v;
}

}  // namespace

int default_worker_count() {
  const unsigned n = std::thread::hardware_concurrency();
  return n == 0 ? 1 : static_cast<int>(n);
}

DatasetManifest generate_lr_set(const DatasetManifest& manifest,
                                const fs::path& out_dir, int workers) {
  for (const ManifestEntry& e : manifest.entries) {
    if (!e.hr) throw InvalidArgument("entry " + e.id + " has no HR path");
  }
  ensure_directory(out_dir);
  DatasetManifest out = manifest;
  internal::parallel_for(out.entries.size(), resolve_workers(workers),
                         [&](std::size_t i, int) {
                           ManifestEntry& e = out.entries[i];
                           const fs::path lr_path = out_dir / (e.id + "x4.png");
                           save_png(generate_lr(load_png(*e.hr), kSrScale), lr_path);
                           e.lr = lr_path;
                         });
  return out;
}

void write_bicubic_submission(const DatasetManifest& manifest,
                              const fs::path& out_dir, int workers) {
  for (const ManifestEntry& e : manifest.entries) {
    if (!e.lr) throw InvalidArgument("entry " + e.id + " has no LR path");
  }
  ensure_directory(out_dir);
  const ResizeSpec spec{Ratio{kSrScale, 1}};
  internal::parallel_for(manifest.entries.size(), resolve_workers(workers),
                         [&](std::size_t i, int) {
                           const ManifestEntry& e = manifest.entries[i];
                           save_png(bicubic_resize(load_png(*e.lr), spec),
                                    out_dir / (e.id + ".png"));
                         });
}

SubmissionBundle scan_submission(const fs::path& directory, std::string team,
                                 Track track) {
  if (!fs::is_directory(directory)) throw FileNotFound(directory);
  SubmissionBundle b{std::move(team), track, directory, {}};
  for (const auto& e : fs::directory_iterator(directory)) {
    if (e.is_regular_file() && e.path().extension() == ".png") {
      b.image_ids.push_back(e.path().stem().string());
    }
  }
  std::sort(b.image_ids.begin(), b.image_ids.end());
  return b;
}

std::string_view defect_kind_name(DefectKind k) {
  switch (k) {
    case DefectKind::kMissing: return "missing";
    case DefectKind::kExtra: return "extra";
    case DefectKind::kUndecodable: return "undecodable";
    case DefectKind::kDimensionMismatch: return "dimension-mismatch";
  }
  return "?";
}

ValidationReport validate_submission(const SubmissionBundle& bundle,
                                     const DatasetManifest& manifest, int workers) {
  ValidationReport report;
  const std::set<std::string> present(bundle.image_ids.begin(), bundle.image_ids.end());
  std::vector<std::optional<Defect>> found(manifest.entries.size());

  internal::parallel_for(manifest.entries.size(), resolve_workers(workers),
                         [&](std::size_t i, int) {
    const ManifestEntry& e = manifest.entries[i];
    if (!present.contains(e.id)) {
      found[i] = Defect{e.id, DefectKind::kMissing, "no " + e.id + ".png"};
      return;
    }
    int want_w = 0, want_h = 0;
    if (e.lr) {
      const PngInfo lr = read_png_info(*e.lr);
      want_w = lr.width * kSrScale;
      want_h = lr.height * kSrScale;
    } else if (e.hr) {
      const PngInfo hr = read_png_info(*e.hr);
      want_w = hr.width / kSrScale * kSrScale;
      want_h = hr.height / kSrScale * kSrScale;
    }
    ImageBuffer sr;
    try {
      sr = load_png(bundle.directory / (e.id + ".png"));
    } catch (const IoError& err) {
      found[i] = Defect{e.id, DefectKind::kUndecodable, err.what()};
      return;
    }
    if (want_w > 0 && (sr.width() != want_w || sr.height() != want_h)) {
      found[i] = Defect{e.id, DefectKind::kDimensionMismatch,
                        std::to_string(sr.width()) + "x" + std::to_string(sr.height()) +
                            ", expected " + std::to_string(want_w) + "x" +
                            std::to_string(want_h)};
    }
  });

  for (auto& d : found) {
    if (d) report.defects.push_back(std::move(*d));
  }
  for (const std::string& id : bundle.image_ids) {
    if (manifest.find(id) == nullptr) {
      report.defects.push_back({id, DefectKind::kExtra, "not in the manifest"});
    }
  }
  std::stable_sort(report.defects.begin(), report.defects.end(),
                   [](const Defect& a, const Defect& b) { return a.id < b.id; });
  report.checked = manifest.entries.size();
  return report;
}

void ProtocolConfig::validate() const {
  if (shave < 0) throw InvalidArgument("shave margin must be >= 0");
}

EvaluationRecord evaluate_submission(const SubmissionBundle& bundle,
                                     const DatasetManifest& manifest,
                                     const std::vector<ProviderDescriptor>& providers,
                                     const EvaluationOptions& options) {
  options.protocol.validate();
  for (const ProviderDescriptor& d : providers) d.validate();
  for (const ManifestEntry& e : manifest.entries) {
    if (!e.hr) throw EvaluationFailed("no HR reference for " + e.id);
  }
  const int workers = resolve_workers(options.workers);
  const ValidationReport report = validate_submission(bundle, manifest, workers);
  if (!report.pass()) throw EvaluationFailed(summarize(report));

  EvaluationRecord record;
  record.team = bundle.team;
  record.track = bundle.track;
  record.dataset = manifest.name + "/" + std::string(split_name(manifest.split));
  record.protocol = options.protocol;
  if (options.timestamps) record.started_at = utc_now();

  std::set<Metric> routable;
  for (const ProviderDescriptor& d : providers) {
    routable.insert(d.metrics.begin(), d.metrics.end());
  }
  std::set<Metric> unavailable;
  std::vector<Metric> provider_metrics;
  for (Metric m : kAllMetrics) {
    if (!is_provider_metric(m)) continue;
    if (routable.contains(m)) {
      provider_metrics.push_back(m);
    } else if (options.allow_partial) {
      unavailable.insert(m);
    } else {
      throw EvaluationFailed("no provider serves " + std::string(metric_name(m)) +
                             " (use --allow-partial to skip it)");
    }
  }

  const NIQEModel& niqe_model =
      options.niqe_model ? *options.niqe_model : default_niqe_model();
  const ProtocolConfig& protocol = options.protocol;
  ScratchDir scratch(options.scratch_dir);

  const std::size_t n = manifest.entries.size();
  std::vector<MetricVector> results(n);
  std::vector<std::unique_ptr<ProviderPool>> pools(workers);
  std::mutex mutex;  // guards unavailable

  auto is_unavailable = [&](Metric m) {
    std::lock_guard<std::mutex> lock(mutex);
    return unavailable.contains(m);
  };

  auto shutdown_pools = [&] {
    for (auto& p : pools) {
      if (p) p->shutdown_all();
    }
  };

  try {
    internal::parallel_for(n, workers, [&](std::size_t i, int worker) {
      const ManifestEntry& e = manifest.entries[i];
      const fs::path sr_path = bundle.directory / (e.id + ".png");
      const ImageBuffer sr = load_png(sr_path);
      const ImageBuffer hr_full = load_png(*e.hr);
      if (hr_full.width() < sr.width() || hr_full.height() < sr.height()) {
        throw EvaluationFailed("HR for " + e.id + " is smaller than the SR output");
      }
      const ImageBuffer hr = center_crop(hr_full, sr.width(), sr.height());
      const bool cropped = hr.width() != hr_full.width() || hr.height() != hr_full.height();

      LumaPlane y_sr = to_luma(sr);
      LumaPlane y_hr = to_luma(hr);
      if (protocol.quantize_luma) {
        y_sr = quantize_8bit(y_sr);
        y_hr = quantize_8bit(y_hr);
      }
      const LumaPlane s_sr = protocol.shave > 0 ? shave_border(y_sr, protocol.shave) : y_sr;
      const LumaPlane s_hr = protocol.shave > 0 ? shave_border(y_hr, protocol.shave) : y_hr;

      MetricVector& v = results[i];
      v.set(Metric::kPsnr, psnr(s_hr, s_sr));
      v.set(Metric::kSsim, ssim(s_hr, s_sr));
      v.set(Metric::kNiqe,
            niqe(protocol.perceptual_on_shaved_luma ? s_sr : y_sr, niqe_model));

      if (provider_metrics.empty()) return;
      fs::path p_sr = sr_path;
      fs::path p_hr = *e.hr;
      if (protocol.perceptual_on_shaved_luma) {
        p_sr = scratch.path() / (e.id + "_sr_y.png");
        p_hr = scratch.path() / (e.id + "_hr_y.png");
        save_png(luma_image(s_sr), p_sr);
        save_png(luma_image(s_hr), p_hr);
      } else if (cropped) {
        p_hr = scratch.path() / (e.id + "_hr.png");
        save_png(hr, p_hr, read_png_info(*e.hr).bit_depth);
      }

      auto& pool = pools[worker];
      if (!pool) pool = std::make_unique<ProviderPool>(providers, options.session);
      for (Metric m : provider_metrics) {
        if (is_unavailable(m)) continue;
        try {
          const double value = pool->evaluate(
              m, p_sr, is_full_reference(m) ? std::optional<fs::path>(p_hr) : std::nullopt);
          v.set(m, value);
        } catch (const ProviderError& err) {
          if (!options.allow_partial) {
            throw EvaluationFailed(std::string(metric_name(m)) + " failed on " + e.id +
                                   ": " + err.what());
          }
          std::lock_guard<std::mutex> lock(mutex);
          unavailable.insert(m);
        }
      }
    });
  } catch (...) {
    shutdown_pools();
    throw;
  }
  shutdown_pools();

  for (const auto& pool : pools) {
    if (!pool) continue;
    for (const auto& [m, meta] : pool->metadata()) {
      record.provider_meta[std::string(metric_name(m))] = meta;
    }
  }

  std::vector<MetricVector> for_aggregate = results;
  for (Metric m : unavailable) {
    for (MetricVector& v : for_aggregate) v.clear(m);
    record.provider_meta.erase(std::string(metric_name(m)));
  }
  for (std::size_t i = 0; i < n; ++i) {
    record.per_image.emplace(manifest.entries[i].id, results[i]);
  }
  record.aggregate = aggregate_submission(for_aggregate);
  if (has_perceptual_inputs(record.aggregate)) {
    record.score = perceptual_score(record.aggregate);
  }
  record.unavailable.assign(unavailable.begin(), unavailable.end());
  if (options.timestamps) record.finished_at = utc_now();
  return record;
}

ordered_json record_to_json(const EvaluationRecord& r) {
  ordered_json j;
  j["format"] = "srbench-record";
  j["version"] = 1;
  j["team"] = r.team;
  j["track"] = static_cast<int>(r.track);
  j["ranked"] = r.ranked;
  j["dataset"] = r.dataset;
  j["protocol"] = {{"shave", r.protocol.shave},
                   {"quantize_luma", r.protocol.quantize_luma},
                   {"perceptual_on_shaved_luma", r.protocol.perceptual_on_shaved_luma}};
  if (r.started_at) j["started_at"] = *r.started_at;
  if (r.finished_at) j["finished_at"] = *r.finished_at;
  j["aggregate"] = metrics_to_json(r.aggregate);
  j["score"] = r.score ? ordered_json(r.score->value) : ordered_json(nullptr);
  j["unavailable"] = ordered_json::array();
  for (Metric m : r.unavailable) j["unavailable"].push_back(metric_name(m));
  j["providers"] = ordered_json::object();
  for (const auto& [name, meta] : r.provider_meta) {
    j["providers"][name] = ordered_json::parse(meta.dump());
  }
  j["images"] = ordered_json::object();
  for (const auto& [id, v] : r.per_image) j["images"][id] = metrics_to_json(v);
  return j;
}

EvaluationRecord record_from_json(const json& j) {
  EvaluationRecord r;
  try {
    if (j.at("format") != "srbench-record") {
      throw InvalidArgument("not an srbench record");
    }
    if (j.at("version") != 1) throw InvalidArgument("unsupported record version");
    r.team = j.at("team").get<std::string>();
    const int track = j.at("track").get<int>();
    if (track != 1 && track != 2) throw InvalidArgument("track must be 1 or 2");
    r.track = static_cast<Track>(track);
    r.ranked = j.value("ranked", true);
    r.dataset = j.value("dataset", "");
    if (j.contains("protocol")) {
      const json& p = j["protocol"];
      r.protocol.shave = p.value("shave", 4);
      r.protocol.quantize_luma = p.value("quantize_luma", true);
      r.protocol.perceptual_on_shaved_luma = p.value("perceptual_on_shaved_luma", false);
    }
    if (j.contains("started_at")) r.started_at = j["started_at"].get<std::string>();
    if (j.contains("finished_at")) r.finished_at = j["finished_at"].get<std::string>();
    r.aggregate = metrics_from_json(j.at("aggregate"));
    if (j.contains("score") && !j["score"].is_null()) {
      r.score = PerceptualScore{j["score"].get<double>()};
    }
    const json unavailable = j.value("unavailable", json::array());
    for (const json& name : unavailable) {
      const auto m = parse_metric(name.get<std::string>());
      if (!m) throw InvalidArgument("unknown metric in unavailable list");
      r.unavailable.push_back(*m);
    }
    const json providers = j.value("providers", json::object());
    for (const auto& [name, meta] : providers.items()) {
      r.provider_meta[name] = meta;
    }
    const json images = j.value("images", json::object());
    for (const auto& [id, v] : images.items()) {
      r.per_image.emplace(id, metrics_from_json(v));
    }
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("malformed record: ") + e.what());
  }
  return r;
}

void save_record(const EvaluationRecord& record, const fs::path& path) {
  if (path.has_parent_path()) ensure_directory(path.parent_path());
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw WriteFailed(path, "cannot open for writing");
  out << record_to_json(record).dump(2) << "\n";
  if (!out) throw WriteFailed(path, "write error");
}

EvaluationRecord load_record(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw FileNotFound(path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw CorruptStream(path, e.what());
  }
  try {
    return record_from_json(j);
  } catch (const InvalidArgument& e) {
    throw CorruptStream(path, e.what());
  }
}

}  // namespace srbench
