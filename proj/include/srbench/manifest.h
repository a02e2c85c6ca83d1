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

// Dataset manifests for the DIV2K, Flickr2K and LSDIR layouts (see
// docs/dataset-layouts.md) and for custom directory trees.

#ifndef SRBENCH_MANIFEST_H_
#define SRBENCH_MANIFEST_H_

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "srbench/errors.h"

namespace srbench {

enum class Split { kTrain, kVal, kTest };

std::string_view split_name(Split s);
std::optional<Split> parse_split(std::string_view s);

struct ManifestEntry {
  std::string id;
  std::optional<std::filesystem::path> hr;
  std::optional<std::filesystem::path> lr;

  bool operator==(const ManifestEntry&) const = default;
};

struct DatasetManifest {
  std::string name;
  Split split = Split::kTest;
  std::size_t expected_count = 0;
  std::vector<ManifestEntry> entries;  // sorted by id

  const ManifestEntry* find(const std::string& id) const;
  bool operator==(const DatasetManifest&) const = default;
};

// Where a split lives under a data root and how files are named.
struct DatasetLayout {
  std::string name;
  Split split = Split::kTest;
  std::size_t expected_count = 0;
  std::vector<std::string> expected_ids;  // empty: any ids, count checked
  std::filesystem::path hr_dir;           // relative to the data root
  std::filesystem::path lr_dir;
  std::string lr_suffix = "x4";           // LR file = <id><suffix>.png
};

// Presets: div2k-{train,val,test}, flickr2k, lsdir-{train,val,test}.
std::optional<DatasetLayout> preset_layout(std::string_view preset);
std::vector<std::string> preset_names();

class ManifestError : public Error {
 public:
  ManifestError(const std::string& what, std::vector<std::string> missing,
                std::vector<std::string> extra)
      : Error(what), missing_(std::move(missing)), extra_(std::move(extra)) {}
  const std::vector<std::string>& missing() const { return missing_; }
  const std::vector<std::string>& extra() const { return extra_; }

 private:
  std::vector<std::string> missing_;
  std::vector<std::string> extra_;
};

// Scans the HR and LR directories that exist under `root`. Throws
// ManifestError on count mismatch (naming missing/extra ids) or duplicates.
DatasetManifest build_manifest(const std::filesystem::path& root,
                               const DatasetLayout& layout);

// Paths under `base` are stored relative to it and resolved against it on
// load, so a workspace can be moved as a whole.
void save_manifest(const DatasetManifest& manifest,
                   const std::filesystem::path& path,
                   const std::filesystem::path& base = {});
DatasetManifest load_manifest(const std::filesystem::path& path,
                              const std::filesystem::path& base = {});

}  // namespace srbench

#endif  // SRBENCH_MANIFEST_H_
