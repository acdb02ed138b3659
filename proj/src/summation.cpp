#include "regdet/summation.hpp"

#include <algorithm>
#include <atomic>
#include <mutex>
#include <thread>

namespace regdet {

namespace {

std::atomic<unsigned>& configured_workers() {
  static std::atomic<unsigned> workers{std::max(1u, std::thread::hardware_concurrency())};
  return workers;
}

}  // namespace

unsigned worker_count() noexcept { return configured_workers().load(); }

void set_worker_count(unsigned workers) noexcept { configured_workers().store(std::max(1u, workers)); }

namespace detail {

void run_chunks(std::size_t chunk_count, const std::function<void(std::size_t)>& job) {
  const std::size_t workers = std::min<std::size_t>(worker_count(), chunk_count);
  if (workers <= 1) {
    for (std::size_t c = 0; c < chunk_count; ++c) job(c);
    return;
  }

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (;;) {
      const std::size_t c = next.fetch_add(1);
      if (c >= chunk_count) return;
      try {
        job(c);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };

  std::vector<std::jthread> pool;
  pool.reserve(workers - 1);
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(worker);
  worker();
  pool.clear();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace detail

}  // namespace regdet
