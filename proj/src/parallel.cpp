// SPDX-License-Identifier: Apache-2.0
#include "expchar/parallel.hpp"

#include <atomic>
#include <exception>
#include <thread>
#include <vector>

namespace expchar {

namespace {
std::atomic<int> g_max_threads{0};
thread_local bool t_inside_parallel = false;
}  // namespace

void set_max_threads(int n) noexcept {
  g_max_threads.store(n < 0 ? 0 : n, std::memory_order_relaxed);
}

int max_threads() noexcept {
  int n = g_max_threads.load(std::memory_order_relaxed);
  if (n == 0) {
    unsigned hw = std::thread::hardware_concurrency();
    n = hw == 0 ? 1 : static_cast<int>(hw);
  }
  return n;
}

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn) {
  const int threads = max_threads();
  if (count == 0) return;
  if (threads <= 1 || count == 1 || t_inside_parallel) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }

  const std::size_t n_workers =
      std::min<std::size_t>(static_cast<std::size_t>(threads), count);
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::atomic<bool> failed{false};

  auto worker = [&]() {
    t_inside_parallel = true;
    for (;;) {
      const std::size_t i = next.fetch_add(1, std::memory_order_relaxed);
      if (i >= count || failed.load(std::memory_order_relaxed)) break;
      try {
        fn(i);
      } catch (...) {
        if (!failed.exchange(true)) first_error = std::current_exception();
        break;
      }
    }
    t_inside_parallel = false;
  };

  std::vector<std::thread> pool;
  pool.reserve(n_workers - 1);
  for (std::size_t w = 1; w < n_workers; ++w) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (failed.load()) std::rethrow_exception(first_error);
}

}  // namespace expchar
