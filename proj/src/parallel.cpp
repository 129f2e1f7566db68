#include "ygraph/parallel.hpp"

#include <omp.h>

#include <atomic>
#include <cstdlib>

namespace ygraph {

namespace {
std::atomic<int> g_threads{0};

int from_env()
{
    int n = omp_get_max_threads();
    if (const char* s = std::getenv("YGRAPH_THREADS")) {
        int v = std::atoi(s);
        if (v > 0 && v < n) n = v;
        if (v > 0 && n <= 0) n = v;
    }
    return n > 0 ? n : 1;
}
} // namespace

int max_threads()
{
    int n = g_threads.load(std::memory_order_relaxed);
    if (n <= 0) {
        n = from_env();
        g_threads.store(n, std::memory_order_relaxed);
    }
    return n;
}

void set_max_threads(int n) { g_threads.store(n > 0 ? n : 1, std::memory_order_relaxed); }

} // namespace ygraph
