#include "knapp/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <thread>
#include <vector>

namespace knapp {

namespace {
std::size_t g_worker_override = 0;
}

void set_worker_count(std::size_t n) { g_worker_override = n; }

std::size_t worker_count() {
  if (g_worker_override > 0) return g_worker_override;
  if (const char* env = std::getenv("KNAPP_WORKERS")) {
    long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<std::size_t>(v);
  }
  unsigned hc = std::thread::hardware_concurrency();
  return hc > 0 ? hc : 1;
}

void parallel_tiles(std::size_t tiles, const std::function<void(std::size_t)>& fn) {
  std::size_t workers = std::min(worker_count(), tiles);
  if (workers <= 1) {
    for (std::size_t t = 0; t < tiles; ++t) fn(t);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        std::size_t t = next.fetch_add(1, std::memory_order_relaxed);
        if (t >= tiles) return;
        fn(t);
      }
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace knapp
