#pragma once

#include <cstddef>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace brw {

/// Thread budget for parallel kernels. Resolution order: BRW_THREADS
/// environment variable, then set_max_threads(), then the OpenMP default.
int max_threads() noexcept;
void set_max_threads(int n) noexcept;

bool has_openmp() noexcept;

/// Runs fn(i) for i in [0, n). Each iteration must write only to its own
/// output slot; no reduction state is shared, so results are identical for
/// any thread count.
template <class F>
void parallel_for(std::size_t n, F&& fn) {
#ifdef _OPENMP
    const int threads = max_threads();
    if (threads > 1 && n > 1) {
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
        for (long long i = 0; i < static_cast<long long>(n); ++i) {
            fn(static_cast<std::size_t>(i));
        }
        return;
    }
#endif
    for (std::size_t i = 0; i < n; ++i) {
        fn(i);
    }
}

}  // namespace brw
