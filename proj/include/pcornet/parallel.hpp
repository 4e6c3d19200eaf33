#pragma once

#include <cstddef>
#include <utility>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace pcornet {

/// Resolves an effective worker count: a positive request wins, otherwise the
/// PCORNET_THREADS environment variable, otherwise all available cores.
int resolve_threads(int requested);

/// Runs body(i) for i in [0, n). Each index must write only to its own output
/// slot; results are then independent of the schedule and of the worker count.
template <typename Body>
void parallel_for(std::size_t n, int threads, Body&& body) {
  const int k = resolve_threads(threads);
#ifdef _OPENMP
  if (k > 1 && n > 1) {
#pragma omp parallel for schedule(dynamic) num_threads(k)
    for (long long i = 0; i < static_cast<long long>(n); ++i) {
      body(static_cast<std::size_t>(i));
    }
    return;
  }
#endif
  (void)k;
  for (std::size_t i = 0; i < n; ++i) {
    body(i);
  }
}

}  // namespace pcornet
