#pragma once

#include <cstddef>
#include <functional>

namespace conewolff {

// Number of worker threads used by parallel_for; 0 means hardware concurrency.
void set_thread_count(unsigned n);
unsigned thread_count();

// Calls body(i) for i in [0, n). Work is split into contiguous blocks, one per
// thread; callers write into slot i of a preallocated buffer and reduce in index
// order afterwards, which keeps results bit-identical for any thread count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace conewolff
