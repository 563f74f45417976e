#pragma once

#include <cstddef>
#include <functional>

namespace knapp {

// Worker count for data-parallel loops: KNAPP_WORKERS env var, else hardware
// concurrency. Can be pinned programmatically (tests rely on this).
std::size_t worker_count();
void set_worker_count(std::size_t n);  // 0 restores the default

// Runs fn(tile) for tile in [0, tiles). Tiles may execute on any worker, in
// any order; callers combine per-tile results in tile order afterwards so the
// outcome does not depend on the worker count.
void parallel_tiles(std::size_t tiles, const std::function<void(std::size_t)>& fn);

}  // namespace knapp
