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

#include "srbench/cli.h"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "srbench/format.h"
#include "srbench/image.h"
#include "srbench/leaderboard.h"
#include "srbench/niqe.h"
#include "srbench/png_io.h"

namespace srbench {
namespace {

namespace fs = std::filesystem;

std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw UsageError("config: '" + key + "' expects a boolean, got '" + v + "'");
}

int parse_int(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const int n = std::stoi(v, &used);
    if (used == v.size()) return n;
  } catch (const std::exception&) {
  }
  throw UsageError("config: '" + key + "' expects an integer, got '" + v + "'");
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FileNotFound(path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw WriteFailed(path, "cannot open for writing");
  out << text;
  if (!out) throw WriteFailed(path, "write error");
}

// Resolves paths against the workspace root and keeps writes inside it.
class Workspace {
 public:
  explicit Workspace(const fs::path& root)
      : root_(fs::weakly_canonical(fs::absolute(root))) {}

  const fs::path& root() const { return root_; }

  fs::path input(const fs::path& p) const { return p.is_absolute() ? p : root_ / p; }

  fs::path output(const fs::path& p) const {
    const fs::path full = fs::weakly_canonical(input(p));
    const fs::path rel = full.lexically_relative(root_);
    if (rel.empty() || *rel.begin() == "..") {
      throw UsageError(p.string() + " is outside the workspace " + root_.string());
    }
    return full;
  }

  std::string display(const fs::path& p) const {
    const fs::path rel = fs::weakly_canonical(p).lexically_relative(root_);
    return rel.empty() || *rel.begin() == ".." ? p.generic_string() : rel.generic_string();
  }

 private:
  fs::path root_;
};

struct GlobalFlags {
  std::string config;
  std::optional<std::string> workspace;
  std::optional<int> shave;
  std::optional<int> workers;
  std::optional<std::string> providers;
  std::optional<std::string> niqe_model;
  bool allow_partial = false;
  bool no_timestamps = false;
  bool no_quantize = false;
  bool perceptual_on_shaved = false;
};

CliConfig resolve_config(const GlobalFlags& g) {
  CliConfig c;
  if (!g.config.empty()) apply_config(parse_config_text(read_text(g.config)), c);
  if (const char* env = std::getenv("SRBENCH_WORKSPACE"); env && *env) c.workspace = env;
  if (g.workspace) c.workspace = *g.workspace;
  if (g.shave) c.protocol.shave = *g.shave;
  if (g.workers) c.workers = *g.workers;
  if (g.providers) c.providers = *g.providers;
  if (g.niqe_model) c.niqe_model = *g.niqe_model;
  if (g.allow_partial) c.allow_partial = true;
  if (g.no_timestamps) c.timestamps = false;
  if (g.no_quantize) c.protocol.quantize_luma = false;
  if (g.perceptual_on_shaved) c.protocol.perceptual_on_shaved_luma = true;
  c.validate();
  return c;
}

MetricVector parse_metric_list(const std::string& text) {
  MetricVector v;
  std::stringstream s(text);
  std::string item;
  while (std::getline(s, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw UsageError("expected name=value, got '" + item + "'");
    const std::string name = trim(item.substr(0, eq));
    const auto m = parse_metric(name);
    if (!m) throw UsageError("unknown metric '" + name + "'");
    const auto value = parse_double(trim(item.substr(eq + 1)));
    if (!value || std::isnan(*value)) {
      throw UsageError("bad value for " + name + ": '" + item.substr(eq + 1) + "'");
    }
    if (v.has(*m)) throw UsageError("metric '" + name + "' given twice");
    v.set(*m, *value);
  }
  return v;
}

// Records (*.json) are always ranked afresh; a leaderboard CSV keeps its
// ranks unless `recompute`.
Leaderboard load_board(const Workspace& ws, const std::vector<std::string>& from,
                       bool recompute) {
  std::vector<EvaluationRecord> records;
  std::vector<LeaderboardEntry> rows;
  for (const std::string& f : from) {
    const fs::path p = ws.input(f);
    if (p.extension() == ".json") {
      records.push_back(load_record(p));
    } else {
      const Leaderboard b = parse_leaderboard_csv(read_text(p));
      rows.insert(rows.end(), b.rows.begin(), b.rows.end());
    }
  }
  if (!records.empty() && !rows.empty()) {
    throw UsageError("--from mixes record files and leaderboard files");
  }
  if (!records.empty()) return build_leaderboard(records);
  if (rows.empty()) throw UsageError("--from names no entries");
  if (recompute) return build_leaderboard(std::move(rows));
  for (const LeaderboardEntry& e : rows) {
    if (e.ranked && (!e.rank_track1 || !e.rank_track2)) {
      throw UsageError("entry '" + e.team + "' has no ranks; use --recompute");
    }
  }
  return order_leaderboard(std::move(rows));
}

std::string format_value(Metric m, double v) {
  return format_fixed(v, m == Metric::kPsnr ? 2 : 4);
}

}  // namespace

void CliConfig::validate() const {
  protocol.validate();
  if (workers < 0) throw UsageError("workers must be >= 1");
}

std::map<std::string, std::string> parse_config_text(const std::string& text) {
  std::map<std::string, std::string> out;
  std::stringstream s(text);
  std::string line;
  int n = 0;
  while (std::getline(s, line)) {
    ++n;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw UsageError("config line " + std::to_string(n) + ": expected key = value");
    }
    out[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return out;
}

void apply_config(const std::map<std::string, std::string>& values, CliConfig& c) {
  for (const auto& [key, v] : values) {
    if (key == "workspace") {
      c.workspace = v;
    } else if (key == "providers") {
      c.providers = v;
    } else if (key == "niqe_model") {
      c.niqe_model = v;
    } else if (key == "shave") {
      c.protocol.shave = parse_int(key, v);
    } else if (key == "workers") {
      c.workers = parse_int(key, v);
    } else if (key == "allow_partial") {
      c.allow_partial = parse_bool(key, v);
    } else if (key == "timestamps") {
      c.timestamps = parse_bool(key, v);
    } else if (key == "quantize_luma") {
      c.protocol.quantize_luma = parse_bool(key, v);
    } else if (key == "perceptual_on_shaved_luma") {
      c.protocol.perceptual_on_shaved_luma = parse_bool(key, v);
    } else {
      throw UsageError("config: unknown key '" + key + "'");
    }
  }
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Super-resolution benchmark toolkit", "srbench"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalFlags g;
  app.add_option("--config", g.config, "key = value configuration file");
  app.add_option("--workspace", g.workspace,
                 "root for relative paths and all writes (env SRBENCH_WORKSPACE)");
  app.add_option("--shave", g.shave, "border excluded from PSNR/SSIM (default 4)");
  app.add_option("--workers", g.workers, "worker threads (default: logical cores)");
  app.add_option("--providers", g.providers, "provider descriptor JSON file");
  app.add_option("--niqe-model", g.niqe_model, "NIQE model file");
  app.add_flag("--allow-partial", g.allow_partial,
               "record without metrics whose provider is absent or failing");
  app.add_flag("--no-timestamps", g.no_timestamps, "omit timestamps from records");
  app.add_flag("--no-quantize", g.no_quantize, "keep luma unquantized before PSNR/SSIM");
  app.add_flag("--perceptual-on-shaved", g.perceptual_on_shaved,
               "feed NIQE and providers the shaved luma plane");

  // degrade
  auto* degrade = app.add_subcommand("degrade", "build a manifest and its x4 bicubic LR set");
  std::string d_preset = "custom", d_root = ".", d_hr, d_lr, d_name = "custom",
              d_split = "test", d_lr_out = "lr", d_manifest_out = "manifest.json",
              d_upsample_out;
  std::size_t d_count = 0;
  degrade->add_option("--preset", d_preset, "dataset preset or 'custom'")
      ->capture_default_str();
  degrade->add_option("--root", d_root, "dataset root")->capture_default_str();
  degrade->add_option("--hr-dir", d_hr, "custom: HR directory under the root");
  degrade->add_option("--lr-dir", d_lr, "custom: existing LR directory under the root");
  degrade->add_option("--count", d_count, "custom: expected image count");
  degrade->add_option("--name", d_name, "custom: dataset name")->capture_default_str();
  degrade->add_option("--split", d_split, "custom: train, val or test")
      ->capture_default_str();
  degrade->add_option("--lr-out", d_lr_out, "LR output directory")->capture_default_str();
  degrade->add_option("--manifest-out", d_manifest_out, "manifest to write")
      ->capture_default_str();
  degrade->add_option("--upsample-out", d_upsample_out,
                      "also write the bicubic x4 submission here");

  // validate
  auto* validate = app.add_subcommand("validate", "check a submission directory");
  std::string v_manifest = "manifest.json", v_submission;
  validate->add_option("--manifest", v_manifest)->capture_default_str();
  validate->add_option("--submission", v_submission, "directory of <id>.png")->required();

  // eval
  auto* eval = app.add_subcommand("eval", "evaluate a submission and write its record");
  std::string e_manifest = "manifest.json", e_submission, e_team, e_record;
  int e_track = 2;
  bool e_unranked = false;
  eval->add_option("--manifest", e_manifest)->capture_default_str();
  eval->add_option("--submission", e_submission, "directory of <id>.png")->required();
  eval->add_option("--team", e_team)->required();
  eval->add_option("--track", e_track)->check(CLI::IsMember({1, 2}))->capture_default_str();
  eval->add_flag("--unranked", e_unranked, "list the team without ranking it");
  eval->add_option("--record-out", e_record, "default records/<team>.json");

  // score
  auto* score = app.add_subcommand("score", "perceptual score from six metric values");
  std::string s_metrics, s_record;
  bool s_full = false;
  auto* s_metrics_opt =
      score->add_option("--metrics", s_metrics, "name=value,... (lpips dists niqe maniqa musiq clipiqa)");
  score->add_option("--record", s_record, "take the aggregate of a record file")
      ->excludes(s_metrics_opt);
  score->add_flag("--full-precision", s_full, "print the shortest exact decimal");

  // rank and report
  auto* rank = app.add_subcommand("rank", "order teams by the combined ranking rule");
  std::vector<std::string> r_from;
  bool r_recompute = false;
  std::string r_format = "text", r_out;
  rank->add_option("--from", r_from, "leaderboard CSV or record JSON files")->required();
  rank->add_flag("--recompute", r_recompute, "rank from the metrics, ignoring stored ranks");
  rank->add_option("--format", r_format)
      ->check(CLI::IsMember({"text", "csv"}))
      ->capture_default_str();
  rank->add_option("--out", r_out, "also write the rendering to this file");

  auto* report = app.add_subcommand("report", "write leaderboard.csv and leaderboard.txt");
  std::vector<std::string> p_from;
  bool p_recompute = false;
  std::string p_out_dir = "reports";
  report->add_option("--from", p_from, "leaderboard CSV or record JSON files")->required();
  report->add_flag("--recompute", p_recompute, "rank from the metrics, ignoring stored ranks");
  report->add_option("--out-dir", p_out_dir)->capture_default_str();

  // fit-niqe
  auto* fit = app.add_subcommand("fit-niqe", "fit a NIQE model to pristine images");
  std::string f_images, f_out = "niqe_model.bin";
  int f_patch = 96;
  double f_threshold = 0.75;
  fit->add_option("--images", f_images, "directory of pristine PNG images")->required();
  fit->add_option("--patch", f_patch)->capture_default_str();
  fit->add_option("--threshold", f_threshold, "sharpness threshold")->capture_default_str();
  fit->add_option("--out", f_out)->capture_default_str();

  if (!args.empty() && !args[0].empty() && args[0][0] != '-' &&
      app.get_subcommand_no_throw(args[0]) == nullptr) {
    err << "srbench: unknown subcommand '" << args[0] << "'\n\n" << app.help();
    return kExitUsage;
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    const CLI::App* target = &app;
    for (const CLI::App* sub : app.get_subcommands()) target = sub;
    out << target->help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "srbench: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  try {
    const CliConfig config = resolve_config(g);
    const Workspace ws(config.workspace);
    if (!fs::is_directory(ws.root())) {
      throw UsageError("workspace " + ws.root().string() + " is not a directory");
    }

    if (*degrade) {
      DatasetLayout layout;
      if (d_preset == "custom") {
        const auto split = parse_split(d_split);
        if (!split) throw UsageError("unknown split '" + d_split + "'");
        if (d_hr.empty() || d_count == 0) {
          throw UsageError("custom layout needs --hr-dir and --count");
        }
        layout.name = d_name;
        layout.split = *split;
        layout.expected_count = d_count;
        layout.hr_dir = d_hr;
        layout.lr_dir = d_lr;
      } else if (auto preset = preset_layout(d_preset)) {
        layout = *preset;
      } else {
        throw UsageError("unknown preset '" + d_preset + "'");
      }
      const DatasetManifest manifest = build_manifest(ws.input(d_root), layout);
      const fs::path lr_out = ws.output(d_lr_out);
      const fs::path manifest_out = ws.output(d_manifest_out);
      std::optional<fs::path> upsample_out;
      if (!d_upsample_out.empty()) upsample_out = ws.output(d_upsample_out);

      const DatasetManifest with_lr = generate_lr_set(manifest, lr_out, config.workers);
      save_manifest(with_lr, manifest_out, ws.root());
      out << "wrote " << with_lr.entries.size() << " LR images to " << ws.display(lr_out)
          << "\nmanifest: " << ws.display(manifest_out) << "\n";
      if (upsample_out) {
        write_bicubic_submission(with_lr, *upsample_out, config.workers);
        out << "bicubic submission: " << ws.display(*upsample_out) << "\n";
      }
      return kExitOk;
    }

    if (*validate) {
      const DatasetManifest manifest = load_manifest(ws.input(v_manifest), ws.root());
      const fs::path dir = ws.input(v_submission);
      const ValidationReport r = validate_submission(
          scan_submission(dir, dir.filename().string(), Track::kPerceptual), manifest,
          config.workers);
      for (const Defect& d : r.defects) {
        out << d.id << "\t" << defect_kind_name(d.kind) << "\t" << d.detail << "\n";
      }
      if (r.pass()) {
        out << "PASS: " << r.checked << " images\n";
        return kExitOk;
      }
      out << "FAIL: " << r.defects.size() << " defect(s)\n";
      return kExitFailure;
    }

    if (*eval) {
      const DatasetManifest manifest = load_manifest(ws.input(e_manifest), ws.root());
      std::vector<ProviderDescriptor> providers;
      if (config.providers) providers = load_provider_descriptors(ws.input(*config.providers));
      std::optional<NIQEModel> model;
      if (config.niqe_model) model = load_niqe_model(ws.input(*config.niqe_model));
      const fs::path record_path =
          ws.output(e_record.empty() ? fs::path("records") / (e_team + ".json") : fs::path(e_record));

      EvaluationOptions options;
      options.protocol = config.protocol;
      options.workers = config.workers;
      options.allow_partial = config.allow_partial;
      options.timestamps = config.timestamps;
      options.niqe_model = model ? &*model : nullptr;
      options.scratch_dir = ws.root() / ".srbench-tmp";

      EvaluationRecord record = evaluate_submission(
          scan_submission(ws.input(e_submission), e_team, static_cast<Track>(e_track)),
          manifest, providers, options);
      record.ranked = !e_unranked;
      std::error_code ec;
      fs::remove(options.scratch_dir, ec);
      save_record(record, record_path);

      out << "team: " << record.team << "\nimages: " << record.per_image.size() << "\n";
      for (Metric m : kAllMetrics) {
        if (auto v = record.aggregate.get(m)) {
          out << metric_name(m) << ": " << format_value(m, *v) << "\n";
        }
      }
      for (Metric m : record.unavailable) {
        out << metric_name(m) << ": unavailable\n";
      }
      out << "score: " << (record.score ? format_fixed(record.score->value, 4) : "N/A")
          << "\nrecord: " << ws.display(record_path) << "\n";
      return kExitOk;
    }

    if (*score) {
      MetricVector metrics;
      if (!s_record.empty()) {
        metrics = load_record(ws.input(s_record)).aggregate;
      } else if (!s_metrics.empty()) {
        metrics = parse_metric_list(s_metrics);
      } else {
        throw UsageError("score needs --metrics or --record");
      }
      const double value = perceptual_score(metrics).value;
      out << (s_full ? format_shortest(value) : format_fixed(value, 4)) << "\n";
      return kExitOk;
    }

    if (*rank) {
      std::optional<fs::path> dest;
      if (!r_out.empty()) dest = ws.output(r_out);
      const Leaderboard board = load_board(ws, r_from, r_recompute);
      const std::string text = r_format == "csv" ? render_leaderboard_csv(board)
                                                 : render_leaderboard_text(board);
      if (dest) write_text(*dest, text);
      out << text;
      return kExitOk;
    }

    if (*report) {
      const fs::path dir = ws.output(p_out_dir);
      const Leaderboard board = load_board(ws, p_from, p_recompute);
      const std::string text = render_leaderboard_text(board);
      write_text(dir / "leaderboard.csv", render_leaderboard_csv(board));
      write_text(dir / "leaderboard.txt", text);
      out << text;
      return kExitOk;
    }

    if (*fit) {
      const fs::path dir = ws.input(f_images);
      if (!fs::is_directory(dir)) throw FileNotFound(dir);
      const fs::path dest = ws.output(f_out);
      std::vector<fs::path> files;
      for (const auto& e : fs::directory_iterator(dir)) {
        if (e.is_regular_file() && e.path().extension() == ".png") files.push_back(e.path());
      }
      std::sort(files.begin(), files.end());
      std::vector<LumaPlane> corpus;
      corpus.reserve(files.size());
      for (const fs::path& f : files) corpus.push_back(quantize_8bit(to_luma(load_png(f))));
      const PristineFit fit_result = fit_pristine_model(corpus, f_patch, f_threshold);
      if (fit_result.degenerate) {
        err << "srbench: corpus statistics are degenerate (covariance ~ 0); "
               "model not written\n";
        return kExitFailure;
      }
      save_niqe_model(fit_result.model, dest);
      out << "images: " << corpus.size() << "\npatches: " << fit_result.patch_count
          << "\nmodel: " << ws.display(dest) << "\n";
      return kExitOk;
    }
  } catch (const UsageError& e) {
    err << "srbench: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "srbench: " << e.what() << "\n";
    return kExitFailure;
  }
  err << app.help();
  return kExitUsage;
}

}  // namespace srbench
