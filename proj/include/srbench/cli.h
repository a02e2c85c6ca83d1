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

// The srbench command line: degrade, validate, eval, score, rank, report and
// fit-niqe behind one entry point.

#ifndef SRBENCH_CLI_H_
#define SRBENCH_CLI_H_

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "srbench/errors.h"
#include "srbench/pipeline.h"

namespace srbench {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

class UsageError : public Error {
 public:
  using Error::Error;
};

struct CliConfig {
  std::filesystem::path workspace = ".";
  std::optional<std::filesystem::path> providers;
  std::optional<std::filesystem::path> niqe_model;
  ProtocolConfig protocol;
  int workers = 0;  // 0: logical core count
  bool allow_partial = false;
  bool timestamps = true;

  void validate() const;
};

// key = value lines; '#' starts a comment. Throws UsageError on malformed
// lines and unknown keys.
std::map<std::string, std::string> parse_config_text(const std::string& text);
void apply_config(const std::map<std::string, std::string>& values, CliConfig& config);

// `args` excludes the program name. Data goes to `out`, diagnostics to
// `err`. Precedence: defaults < --config file < SRBENCH_WORKSPACE < flags.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace srbench

#endif  // SRBENCH_CLI_H_
