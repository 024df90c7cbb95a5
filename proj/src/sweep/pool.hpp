#pragma once

#include <atomic>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace thermoq::sweep {

// Runs fn(i) for every i in [0, n).  With workers > 1 the indices are pulled
// from a shared counter by a small thread pool; fn must confine its writes to
// per-index slots so the result is identical for any worker count.  The first
// exception thrown by any worker is rethrown on the calling thread.
inline void parallel_for(long n, int workers,
                         const std::function<void(long)>& fn) {
    if (n <= 0) return;
    if (workers <= 1 || n == 1) {
        for (long i = 0; i < n; ++i) fn(i);
        return;
    }

    std::atomic<long> next{0};
    std::exception_ptr error;
    std::mutex error_mu;
    auto run = [&] {
        for (;;) {
            long i = next.fetch_add(1, std::memory_order_relaxed);
            if (i >= n) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mu);
                if (!error) error = std::current_exception();
                return;
            }
        }
    };

    long k = workers < n ? workers : n;
    std::vector<std::thread> threads;
    threads.reserve(std::size_t(k));
    for (long t = 0; t < k; ++t) threads.emplace_back(run);
    for (auto& t : threads) t.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace thermoq::sweep
