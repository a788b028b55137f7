#pragma once

#include <cstddef>
#include <exception>
#include <functional>

namespace ekc {

// Worker count used by all internal parallel loops; 0 means hardware concurrency.
void set_thread_count(unsigned n);
unsigned thread_count();

// Runs body(i) for every i in [0, n). Workers claim indices dynamically;
// callers write into per-index slots and reduce in index order afterwards so
// results do not depend on the worker count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace ekc
