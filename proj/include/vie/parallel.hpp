#pragma once

#include <cstddef>
#include <functional>

namespace vie {

/// Worker count for the correction stage: VIE_PARAREAL_THREADS when set to a
/// positive integer, otherwise std::thread::hardware_concurrency() (at least 1).
unsigned default_thread_count();

/// Runs body(i) for i in [0, count) on up to `threads` workers. Each index runs
/// exactly once; the first exception thrown by any body is rethrown here.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& body);

}  // namespace vie
