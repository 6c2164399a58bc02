#include "brw/parallel.hpp"

#include <atomic>
#include <cstdlib>

namespace brw {

namespace {
std::atomic<int> g_requested_threads{0};  // 0 = not set
}

void set_max_threads(int n) noexcept {
    g_requested_threads.store(n > 0 ? n : 0);
}

int max_threads() noexcept {
    if (const char* env = std::getenv("BRW_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0) return n;
    }
    if (const int n = g_requested_threads.load(); n > 0) return n;
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

bool has_openmp() noexcept {
#ifdef _OPENMP
    return true;
#else
    return false;
#endif
}

}  // namespace brw
