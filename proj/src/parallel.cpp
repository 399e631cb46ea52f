#include "arv/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <thread>

namespace arv {

std::vector<std::pair<std::size_t, std::size_t>> chunk_ranges(
    std::size_t item_count, std::size_t chunk_count) {
  std::vector<std::pair<std::size_t, std::size_t>> ranges;
  ranges.reserve(chunk_count);
  std::size_t base = chunk_count ? item_count / chunk_count : 0;
  std::size_t rem = chunk_count ? item_count % chunk_count : 0;
  std::size_t begin = 0;
  for (std::size_t c = 0; c < chunk_count; ++c) {
    std::size_t len = base + (c < rem ? 1 : 0);
    ranges.emplace_back(begin, begin + len);
    begin += len;
  }
  return ranges;
}

std::size_t worker_thread_count() {
  if (const char* env = std::getenv("ARV_THREADS")) {
    long v = std::strtol(env, nullptr, 10);
    if (v >= 1) return static_cast<std::size_t>(v);
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw ? hw : 1;
}

void parallel_chunks(
    std::size_t item_count, std::size_t chunk_count,
    const std::function<void(std::size_t, std::size_t, std::size_t)>& fn) {
  auto ranges = chunk_ranges(item_count, chunk_count);
  std::size_t threads = std::min(worker_thread_count(), chunk_count);
  if (threads <= 1) {
    for (std::size_t c = 0; c < chunk_count; ++c) {
      if (ranges[c].first < ranges[c].second)
        fn(c, ranges[c].first, ranges[c].second);
    }
    return;
  }
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      std::size_t c = next.fetch_add(1);
      if (c >= chunk_count) return;
      if (ranges[c].first < ranges[c].second)
        fn(c, ranges[c].first, ranges[c].second);
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
}

}  // namespace arv
