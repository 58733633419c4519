#pragma once

#include <atomic>
#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace pxqama {

/// Run fn(i) for i in [0, n) on `workers` threads (0 = hardware concurrency).
/// Work is handed out through an atomic index, so any i may run on any
/// thread; callers must make fn(i) independent of execution order.
inline void parallel_for(std::size_t n, unsigned workers,
                         const std::function<void(std::size_t)>& fn) {
    if (n == 0) return;
    unsigned nw = workers != 0 ? workers : std::thread::hardware_concurrency();
    if (nw <= 1 || n == 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    if (nw > n) nw = static_cast<unsigned>(n);
    std::atomic<std::size_t> next{0};
    auto run = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1, std::memory_order_relaxed);
            if (i >= n) return;
            fn(i);
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(nw - 1);
    for (unsigned t = 0; t + 1 < nw; ++t) pool.emplace_back(run);
    run();
    for (auto& th : pool) th.join();
}

}  // namespace pxqama
