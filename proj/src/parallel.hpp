#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace crn::detail {

/// Runs body(i) for i in [0, count) on up to `workers` threads using contiguous blocks.
/// If several indices throw, the exception from the lowest index is rethrown, so failures
/// are reported identically for any worker count.
inline void parallel_for(std::size_t count, std::size_t workers,
                         const std::function<void(std::size_t)>& body) {
  workers = std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(count, 1));
  std::vector<std::size_t> failed_at(workers, count);
  std::vector<std::exception_ptr> errors(workers);
  auto run_block = [&](std::size_t w) {
    const std::size_t begin = count * w / workers;
    const std::size_t end = count * (w + 1) / workers;
    for (std::size_t i = begin; i < end; ++i) {
      try {
        body(i);
      } catch (...) {
        failed_at[w] = i;
        errors[w] = std::current_exception();
        return;
      }
    }
  };
  if (workers == 1) {
    run_block(0);
  } else {
    std::vector<std::thread> threads;
    threads.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) threads.emplace_back(run_block, w);
    for (auto& t : threads) t.join();
  }
  const auto first = std::min_element(failed_at.begin(), failed_at.end());
  if (*first < count) std::rethrow_exception(errors[static_cast<std::size_t>(first - failed_at.begin())]);
}

}  // namespace crn::detail
