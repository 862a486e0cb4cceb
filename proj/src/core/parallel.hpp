#pragma once

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace proxsim {

/// Worker count: PROXSIM_THREADS if set, hardware concurrency otherwise.
inline unsigned worker_count() {
    if (const char* env = std::getenv("PROXSIM_THREADS")) {
        const long n = std::strtol(env, nullptr, 10);
        if (n >= 1) return static_cast<unsigned>(n);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

/// Static-partition parallel loop over [0, n). Results must not depend on
/// which thread runs which index; callers keep determinism by deriving any
/// randomness from the index itself.
inline void parallel_for(size_t n, const std::function<void(size_t)>& fn, unsigned threads = 0) {
    if (threads == 0) threads = worker_count();
    threads = static_cast<unsigned>(std::min<size_t>(threads, n == 0 ? 1 : n));
    if (threads <= 1) {
        for (size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) {
        pool.emplace_back([t, threads, n, &fn] {
            for (size_t i = t; i < n; i += threads) fn(i);
        });
    }
    for (auto& th : pool) th.join();
}

}  // namespace proxsim
