#pragma once

#include <cstddef>
#include <functional>

namespace rq {

// Worker cap from RQ_THREADS (default: hardware concurrency, at least 1).
std::size_t worker_count();

// True when RQ_DETERMINISTIC=1. Every code path in the library is already
// order-stable; the flag is recorded in run manifests.
bool deterministic_mode();

// Runs fn(i) for i in [0, n). Each index is independent, so the result never
// depends on how indices are scheduled across threads.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace rq
