#pragma once

#include <atomic>
#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace bellforge {

// Worker cap: min(hardware, BELLFORGE_THREADS when set).
inline unsigned max_workers() {
  unsigned hw = std::thread::hardware_concurrency();
  if (hw == 0) hw = 1;
  if (const char* env = std::getenv("BELLFORGE_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0 && static_cast<unsigned>(v) < hw) hw = static_cast<unsigned>(v);
  }
  return hw;
}

// Runs fn(i) for i in [0, count) on a small pool. Each index is processed
// exactly once; callers must make fn(i) independent of scheduling.
inline void parallel_for(int count, const std::function<void(int)>& fn) {
  if (count <= 0) return;
  const unsigned workers = std::min<unsigned>(max_workers(), static_cast<unsigned>(count));
  if (workers <= 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  auto body = [&] {
    int i;
    while ((i = next.fetch_add(1)) < count) fn(i);
  };
  pool.reserve(workers - 1);
  for (unsigned t = 1; t < workers; ++t) pool.emplace_back(body);
  body();
  for (auto& t : pool) t.join();
}

}  // namespace bellforge
