#pragma once

#include <atomic>
#include <cstdlib>
#include <exception>
#include <thread>
#include <vector>

namespace cotforge {

// Worker pool size: explicit request, else COTFORGE_THREADS, else hardware.
inline int worker_count(int requested = 0) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("COTFORGE_THREADS")) {
        const int v = std::atoi(env);
        if (v > 0) return v;
    }
    const unsigned hc = std::thread::hardware_concurrency();
    return hc ? static_cast<int>(hc) : 1;
}

// Runs fn(i) for i in [0, n). Callers write into preallocated per-index
// slots, so results are identical for any thread count.
template <typename Fn>
void parallel_for(int n, Fn&& fn, int threads = 0) {
    const int workers = std::min(worker_count(threads), n > 0 ? n : 1);
    if (n <= 0) return;
    if (workers <= 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr first_error;
    std::atomic<bool> failed{false};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&]() {
            while (!failed.load(std::memory_order_relaxed)) {
                const int i = next.fetch_add(1);
                if (i >= n) break;
                try {
                    fn(i);
                } catch (...) {
                    if (!failed.exchange(true)) first_error = std::current_exception();
                    break;
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

}  // namespace cotforge
