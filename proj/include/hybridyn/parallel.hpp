#pragma once

#include <cstddef>
#include <functional>

namespace hybridyn {

// Runs body(i) for i in [0, count) on up to `threads` workers (0 = hardware
// concurrency). Work is handed out in contiguous chunks; body must only write
// to slots owned by index i. The first exception thrown is rethrown after all
// workers have stopped.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body,
                  std::size_t threads = 0);

std::size_t default_thread_count() noexcept;

}  // namespace hybridyn
