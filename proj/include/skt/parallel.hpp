#pragma once

#include <cstddef>
#include <functional>

namespace skt {

/// Process-wide worker count for line sweeps. 1 (the default) runs inline.
void set_thread_count(int threads);
int thread_count() noexcept;

/// Calls body(begin, end) over disjoint contiguous chunks covering [0, n).
/// Every index is visited exactly once, so results do not depend on the
/// number of workers as long as body writes only to its own indices.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace skt
