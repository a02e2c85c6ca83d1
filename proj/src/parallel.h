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

#ifndef SRBENCH_SRC_PARALLEL_H_
#define SRBENCH_SRC_PARALLEL_H_

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace srbench::internal {

// Runs fn(index, worker) for index in [0, n) on up to `workers` threads. The
// first exception stops the remaining work and is rethrown after the join.
template <typename Fn>
void parallel_for(std::size_t n, int workers, Fn&& fn) {
  const std::size_t count =
      std::min<std::size_t>(n, static_cast<std::size_t>(std::max(workers, 1)));
  std::atomic<std::size_t> next{0};
  std::atomic<bool> stop{false};
  std::exception_ptr error;
  std::mutex error_mutex;

  auto body = [&](int worker) {
    for (;;) {
      if (stop.load()) return;
      const std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        fn(i, worker);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        stop.store(true);
        return;
      }
    }
  };

  if (count <= 1) {
    body(0);
  } else {
    std::vector<std::thread> threads;
    threads.reserve(count);
    for (std::size_t w = 0; w < count; ++w) {
      threads.emplace_back(body, static_cast<int>(w));
    }
    for (std::thread& t : threads) t.join();
  }
  if (error) std::rethrow_exception(error);
}

}  // namespace srbench::internal

#endif  // SRBENCH_SRC_PARALLEL_H_
