#pragma once

#include <cstddef>
#include <functional>

namespace twophoton {

// Worker count used by parallel_for when no explicit count is passed.
// Zero selects std::thread::hardware_concurrency().
void set_thread_count(std::size_t n);
std::size_t thread_count();

// Runs body(begin, end) over contiguous blocks of [0, n). Blocks are disjoint
// and each index is visited once, so results written by index do not depend
// on the schedule. The first exception thrown by any block is rethrown.
void parallel_for(std::size_t n,
                  const std::function<void(std::size_t, std::size_t)>& body,
                  std::size_t threads = 0);

}  // namespace twophoton
