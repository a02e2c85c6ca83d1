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

// Reference mock of the metric-provider protocol. Returns canned values and
// can misbehave on request for conformance and fault-injection tests.
//
//   srbench_mock_provider [--advertise lpips,dists] [--value lpips=0.2113]
//                         [--fault MODE] [--fault-at N] [--check-files]
//
// MODE: none, exit-at-start, no-handshake, crash, hang, nonfinite,
//       error-frame, wrong-id, ignore-shutdown, old-protocol.

#include <unistd.h>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "CLI11.hpp"

namespace {

using nlohmann::ordered_json;

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream in(s);
  for (std::string item; std::getline(in, item, sep);) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

void emit(const ordered_json& frame) { std::cout << frame.dump() << std::endl; }

[[noreturn]] void hang() {
  for (;;) std::this_thread::sleep_for(std::chrono::hours(1));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mock metric provider"};
  std::string advertise = "lpips,dists,maniqa,musiq,clipiqa";
  std::vector<std::string> values;
  std::string fault = "none";
  int fault_at = 1;
  bool check_files = false;
  app.add_option("--advertise", advertise, "Comma-separated metric list");
  app.add_option("--value", values, "metric=value override (repeatable)");
  app.add_option("--fault", fault, "Fault to inject")
      ->check(CLI::IsMember({"none", "exit-at-start", "no-handshake", "crash",
                             "hang", "nonfinite", "error-frame", "wrong-id",
                             "ignore-shutdown", "old-protocol"}));
  app.add_option("--fault-at", fault_at, "1-based evaluate request to fault on");
  app.add_flag("--check-files", check_files,
               "Answer with an error frame when an image path does not exist");
  CLI11_PARSE(app, argc, argv);

  // Canned defaults: the SNUCV row of the challenge results table.
  std::map<std::string, double> canned = {{"lpips", 0.2113},
                                          {"dists", 0.1082},
                                          {"maniqa", 0.4939},
                                          {"musiq", 71.4919},
                                          {"clipiqa", 0.7543}};
  for (const std::string& kv : values) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) {
      std::cerr << "mock: bad --value " << kv << "\n";
      return 2;
    }
    canned[kv.substr(0, eq)] = std::stod(kv.substr(eq + 1));
  }

  if (fault == "exit-at-start") return 3;

  int evaluates = 0;
  for (std::string line; std::getline(std::cin, line);) {
    if (line.empty()) continue;
    nlohmann::json req;
    try {
      req = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception&) {
      std::cerr << "mock: unparsable frame\n";
      return 4;
    }
    const std::string type = req.value("type", "");
    const auto id = req.value("id", std::int64_t{-1});

    if (type == "hello") {
      if (fault == "no-handshake") hang();
      ordered_json caps;
      caps["type"] = "capabilities";
      caps["id"] = id;
      caps["protocol"] = fault == "old-protocol" ? 0 : 1;
      caps["metric"] = split(advertise, ',');
      emit(caps);
    } else if (type == "evaluate") {
      ++evaluates;
      const bool faulty = evaluates == fault_at;
      const std::string metric = req.value("metric", "");
      if (faulty && fault == "crash") std::abort();
      if (faulty && fault == "hang") hang();
      if (faulty && fault == "nonfinite") {
        std::cout << R"({"type":"result","id":)" << id << R"(,"metric":")"
                  << metric << R"(","value":NaN})" << std::endl;
        continue;
      }
      ordered_json resp;
      if (faulty && fault == "error-frame") {
        resp["type"] = "error";
        resp["id"] = id;
        resp["message"] = "injected failure";
        emit(resp);
        continue;
      }
      std::string missing;
      if (check_files) {
        for (const char* key : {"sr", "hr"}) {
          if (req.contains(key) &&
              !std::filesystem::exists(req[key].get<std::string>())) {
            missing = req[key].get<std::string>();
          }
        }
      }
      if (!canned.contains(metric) || !missing.empty()) {
        resp["type"] = "error";
        resp["id"] = id;
        resp["message"] = missing.empty() ? "unsupported metric " + metric
                                          : "cannot read " + missing;
        emit(resp);
        continue;
      }
      resp["type"] = "result";
      resp["id"] = faulty && fault == "wrong-id" ? id + 7 : id;
      resp["metric"] = metric;
      resp["value"] = canned[metric];
      resp["meta"] = {{"checkpoint", "mock-" + metric}};
      emit(resp);
    } else if (type == "shutdown") {
      if (fault == "ignore-shutdown") hang();
      return 0;
    } else {
      std::cerr << "mock: unexpected frame type " << type << "\n";
      return 5;
    }
  }
  if (fault == "ignore-shutdown") hang();
  return 0;
}
