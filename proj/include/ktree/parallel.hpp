#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace ktree {

/// Applies `map` to indices 0..count-1 on `workers` threads and folds the
/// results with `reduce` into per-worker accumulators, which are then folded
/// into `init` in worker order. `reduce` must be commutative and associative
/// for the result to be independent of scheduling. `stop` lets a worker end the
/// run early (returning true from it skips the remaining indices).
template <typename Acc, typename Map, typename Reduce, typename Stop>
Acc parallel_map_reduce(std::size_t count, unsigned workers, Acc init, Map map, Reduce reduce,
                        Stop stop) {
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(count, 1))));
  std::atomic<std::size_t> next{0};
  std::atomic<bool> halted{false};
  std::vector<Acc> partial(workers, init);
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto body = [&](unsigned w) {
    try {
      while (!halted.load()) {
        std::size_t i = next.fetch_add(1);
        if (i >= count) break;
        auto value = map(i);
        if (stop(value)) halted.store(true);
        reduce(partial[w], std::move(value));
      }
    } catch (...) {
      std::lock_guard<std::mutex> lock(failure_mutex);
      if (!failure) failure = std::current_exception();
      halted.store(true);
    }
  };

  if (workers == 1) {
    body(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(body, w);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
  for (auto& acc : partial) reduce(init, std::move(acc));
  return init;
}

template <typename Acc, typename Map, typename Reduce>
Acc parallel_map_reduce(std::size_t count, unsigned workers, Acc init, Map map, Reduce reduce) {
  return parallel_map_reduce(count, workers, std::move(init), std::move(map), std::move(reduce),
                             [](const auto&) { return false; });
}

}  // namespace ktree
