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

#include "srbench/manifest.h"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>

#include <nlohmann/json.hpp>

namespace srbench {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::vector<std::string> numbered_ids(int first, int last, int width) {
  std::vector<std::string> ids;
  ids.reserve(last - first + 1);
  char buf[32];
  for (int i = first; i <= last; ++i) {
    std::snprintf(buf, sizeof(buf), "%0*d", width, i);
    ids.emplace_back(buf);
  }
  return ids;
}

bool is_png(const fs::path& p) {
  std::string ext = p.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return ext == ".png";
}

// id -> path for the PNG files of `dir`, stripping `suffix` from stems.
std::map<std::string, fs::path> scan(const fs::path& dir,
                                     const std::string& suffix,
                                     std::vector<std::string>* duplicates) {
  std::map<std::string, fs::path> out;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (!e.is_regular_file() || !is_png(e.path())) continue;
    std::string id = e.path().stem().string();
    if (!suffix.empty()) {
      if (id.size() <= suffix.size() ||
          id.compare(id.size() - suffix.size(), suffix.size(), suffix) != 0) {
        continue;
      }
      id.resize(id.size() - suffix.size());
    }
    if (!out.emplace(id, e.path()).second) duplicates->push_back(id);
  }
  return out;
}

std::string join(const std::vector<std::string>& ids, std::size_t limit = 10) {
  std::string out;
  for (std::size_t i = 0; i < ids.size() && i < limit; ++i) {
    if (i) out += ", ";
    out += ids[i];
  }
  if (ids.size() > limit) out += ", ... (" + std::to_string(ids.size()) + " total)";
  return out;
}

}  // namespace

std::string_view split_name(Split s) {
  switch (s) {
    case Split::kTrain: return "train";
    case Split::kVal: return "val";
    case Split::kTest: return "test";
  }
  return "?";
}

std::optional<Split> parse_split(std::string_view s) {
  for (Split v : {Split::kTrain, Split::kVal, Split::kTest}) {
    if (split_name(v) == s) return v;
  }
  return std::nullopt;
}

const ManifestEntry* DatasetManifest::find(const std::string& id) const {
  auto it = std::lower_bound(
      entries.begin(), entries.end(), id,
      [](const ManifestEntry& e, const std::string& key) { return e.id < key; });
  return it != entries.end() && it->id == id ? &*it : nullptr;
}

std::optional<DatasetLayout> preset_layout(std::string_view preset) {
  DatasetLayout l;
  if (preset == "div2k-train" || preset == "div2k-val" || preset == "div2k-test") {
    const std::string folder = preset == "div2k-train" ? "train"
                               : preset == "div2k-val" ? "valid"
                                                       : "test";
    l.name = "DIV2K";
    l.split = preset == "div2k-train" ? Split::kTrain
              : preset == "div2k-val" ? Split::kVal
                                      : Split::kTest;
    const int first = l.split == Split::kTrain ? 1 : l.split == Split::kVal ? 801 : 901;
    const int last = l.split == Split::kTrain ? 800 : l.split == Split::kVal ? 900 : 1000;
    l.expected_ids = numbered_ids(first, last, 4);
    l.hr_dir = "DIV2K_" + folder + "_HR";
    l.lr_dir = fs::path("DIV2K_" + folder + "_LR_bicubic") / "X4";
  } else if (preset == "flickr2k") {
    l.name = "Flickr2K";
    l.split = Split::kTrain;
    l.expected_ids = numbered_ids(1, 2650, 6);
    l.hr_dir = "Flickr2K_HR";
    l.lr_dir = fs::path("Flickr2K_LR_bicubic") / "X4";
  } else if (preset == "lsdir-train" || preset == "lsdir-val" ||
             preset == "lsdir-test") {
    const std::string split = std::string(preset.substr(6));
    l.name = "LSDIR";
    l.split = *parse_split(split);
    l.expected_ids = numbered_ids(1, l.split == Split::kTrain ? 84991 : 1000, 7);
    l.hr_dir = fs::path("LSDIR") / split / "HR";
    l.lr_dir = fs::path("LSDIR") / split / "LR" / "X4";
  } else {
    return std::nullopt;
  }
  l.expected_count = l.expected_ids.size();
  return l;
}

std::vector<std::string> preset_names() {
  return {"div2k-train", "div2k-val", "div2k-test", "flickr2k",
          "lsdir-train", "lsdir-val", "lsdir-test"};
}

DatasetManifest build_manifest(const fs::path& root, const DatasetLayout& layout) {
  const fs::path hr_dir = root / layout.hr_dir;
  const fs::path lr_dir = root / layout.lr_dir;
  const bool has_hr = !layout.hr_dir.empty() && fs::is_directory(hr_dir);
  const bool has_lr = !layout.lr_dir.empty() && fs::is_directory(lr_dir);
  if (!has_hr && !has_lr) {
    throw ManifestError("neither " + hr_dir.string() + " nor " + lr_dir.string() +
                            " exists",
                        {}, {});
  }
  std::vector<std::string> duplicates;
  std::map<std::string, fs::path> hr, lr;
  if (has_hr) hr = scan(hr_dir, "", &duplicates);
  if (has_lr) lr = scan(lr_dir, layout.lr_suffix, &duplicates);
  if (!duplicates.empty()) {
    throw ManifestError("duplicate image ids: " + join(duplicates), {}, duplicates);
  }

  std::set<std::string> found;
  for (const auto& [id, _] : hr) found.insert(id);
  for (const auto& [id, _] : lr) found.insert(id);

  std::vector<std::string> missing, extra;
  if (!layout.expected_ids.empty()) {
    const std::set<std::string> expected(layout.expected_ids.begin(),
                                         layout.expected_ids.end());
    for (const std::string& id : expected) {
      if ((has_hr && !hr.contains(id)) || (has_lr && !lr.contains(id))) {
        missing.push_back(id);
      }
    }
    for (const std::string& id : found) {
      if (!expected.contains(id)) extra.push_back(id);
    }
  } else if (has_hr && has_lr) {
    // Without an id list, HR and LR must at least agree with each other.
    for (const std::string& id : found) {
      if (!hr.contains(id) || !lr.contains(id)) missing.push_back(id);
    }
  }
  if (!missing.empty() || !extra.empty() || found.size() != layout.expected_count) {
    std::string what = layout.name + "/" + std::string(split_name(layout.split)) +
                       ": expected " + std::to_string(layout.expected_count) +
                       " images, found " + std::to_string(found.size());
    if (!missing.empty()) what += "; missing: " + join(missing);
    if (!extra.empty()) what += "; unexpected: " + join(extra);
    throw ManifestError(what, missing, extra);
  }

  DatasetManifest m;
  m.name = layout.name;
  m.split = layout.split;
  m.expected_count = layout.expected_count;
  for (const std::string& id : found) {
    ManifestEntry e;
    e.id = id;
    if (auto it = hr.find(id); it != hr.end()) e.hr = it->second;
    if (auto it = lr.find(id); it != lr.end()) e.lr = it->second;
    m.entries.push_back(std::move(e));
  }
  return m;
}

void save_manifest(const DatasetManifest& m, const fs::path& path,
                   const fs::path& base) {
  auto rel = [&](const fs::path& p) {
    if (base.empty()) return p.generic_string();
    const fs::path r = fs::absolute(p).lexically_relative(fs::absolute(base));
    if (r.empty() || *r.begin() == "..") return p.generic_string();
    return r.generic_string();
  };
  nlohmann::ordered_json j;
  j["format"] = "srbench-manifest";
  j["version"] = 1;
  j["name"] = m.name;
  j["split"] = split_name(m.split);
  j["expected_count"] = m.expected_count;
  j["entries"] = nlohmann::ordered_json::array();
  for (const ManifestEntry& e : m.entries) {
    nlohmann::ordered_json item;
    item["id"] = e.id;
    if (e.hr) item["hr"] = rel(*e.hr);
    if (e.lr) item["lr"] = rel(*e.lr);
    j["entries"].push_back(item);
  }
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw WriteFailed(path, "cannot open for writing");
  out << j.dump(2) << "\n";
  if (!out) throw WriteFailed(path, "write error");
}

DatasetManifest load_manifest(const fs::path& path, const fs::path& base) {
  auto resolve = [&](const std::string& s) {
    fs::path p(s);
    return p.is_relative() && !base.empty() ? base / p : p;
  };
  std::ifstream in(path);
  if (!in) throw FileNotFound(path);
  DatasetManifest m;
  try {
    const json j = json::parse(in);
    if (j.at("format") != "srbench-manifest" || j.at("version") != 1) {
      throw CorruptStream(path, "not a version-1 srbench manifest");
    }
    m.name = j.at("name").get<std::string>();
    const auto split = parse_split(j.at("split").get<std::string>());
    if (!split) throw CorruptStream(path, "unknown split");
    m.split = *split;
    m.expected_count = j.at("expected_count").get<std::size_t>();
    for (const json& item : j.at("entries")) {
      ManifestEntry e;
      e.id = item.at("id").get<std::string>();
      if (item.contains("hr")) e.hr = resolve(item["hr"].get<std::string>());
      if (item.contains("lr")) e.lr = resolve(item["lr"].get<std::string>());
      m.entries.push_back(std::move(e));
    }
  } catch (const json::exception& e) {
    throw CorruptStream(path, e.what());
  }
  std::sort(m.entries.begin(), m.entries.end(),
            [](const ManifestEntry& a, const ManifestEntry& b) { return a.id < b.id; });
  if (m.entries.size() != m.expected_count) {
    throw CorruptStream(path, "entry count does not match expected_count");
  }
  for (std::size_t i = 1; i < m.entries.size(); ++i) {
    if (m.entries[i].id == m.entries[i - 1].id) {
      throw CorruptStream(path, "duplicate id " + m.entries[i].id);
    }
  }
  return m;
}

}  // namespace srbench
