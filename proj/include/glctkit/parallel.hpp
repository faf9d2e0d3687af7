#pragma once

#include <cstddef>
#include <functional>

namespace glctkit {

/// Worker count used by the library's parallel loops. Defaults to the
/// GLCTKIT_THREADS environment variable, else 1.
int thread_count();
void set_thread_count(int n);

/// Runs body(i) for i in [0, count). Each index is visited exactly once; callers
/// write results into pre-sized slots so the outcome does not depend on scheduling.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace glctkit
