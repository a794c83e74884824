// Copyright 2026 The occam-icl Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef OCCAM_NUMERICS_PARALLEL_HPP_
#define OCCAM_NUMERICS_PARALLEL_HPP_

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <type_traits>
#include <vector>

namespace occam {

/// A task in parallel_map threw; carries the failing index.
class TaskError : public std::runtime_error {
 public:
  TaskError(std::size_t index, const std::string& what)
      : std::runtime_error("task " + std::to_string(index) + ": " + what),
        index_(index) {}
  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

/// Number of workers for a request of `threads` (0 = hardware concurrency).
inline std::size_t resolve_thread_count(std::size_t threads) {
  if (threads != 0) return threads;
  return std::max<std::size_t>(1, std::thread::hardware_concurrency());
}

/// Evaluates fn(0) .. fn(n-1) on up to `threads` workers and returns the
/// results in index order. Output is independent of the worker count as long
/// as fn(i) depends only on i. If any call throws, the failure with the
/// lowest index is rethrown as a TaskError.
template <typename Fn>
auto parallel_map(std::size_t n, std::size_t threads, Fn&& fn)
    -> std::vector<std::invoke_result_t<Fn&, std::size_t>> {
  using Result = std::invoke_result_t<Fn&, std::size_t>;
  std::vector<std::optional<Result>> slots(n);
  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::optional<std::size_t> first_error_index;
  std::string first_error_message;

  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        slots[i].emplace(fn(i));
      } catch (const std::exception& e) {
        std::lock_guard lock(error_mutex);
        if (!first_error_index || i < *first_error_index) {
          first_error_index = i;
          first_error_message = e.what();
        }
      }
    }
  };

  const std::size_t workers = std::min(resolve_thread_count(threads), std::max<std::size_t>(n, 1));
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
  }
  if (first_error_index) throw TaskError(*first_error_index, first_error_message);

  std::vector<Result> out;
  out.reserve(n);
  for (auto& slot : slots) out.push_back(std::move(*slot));
  return out;
}

}  // namespace occam

#endif  // OCCAM_NUMERICS_PARALLEL_HPP_
