#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace idsq {

/// Worker count for sweeps. Results never depend on it; only wall time does.
struct Parallelism {
    unsigned threads = 1;

    /// IDSQ_THREADS if set, else hardware concurrency.
    static Parallelism from_environment();
};

/// Runs body(i) for i in [0, count) on up to `threads` workers.
///
/// Work is handed out in fixed contiguous blocks; callers write into
/// per-index slots and merge in index order, which keeps every reduction
/// independent of the schedule. The first exception thrown by any body is
/// rethrown on the calling thread after all workers join.
template <typename Body>
void parallel_for(std::size_t count, Parallelism par, Body&& body) {
    unsigned workers = std::max(1u, par.threads);
    if (workers == 1 || count < 2) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, count));
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            // Strided assignment balances rows whose cost shrinks with the index.
            for (std::size_t i = w; i < count; i += workers) {
                try {
                    body(i);
                } catch (...) {
                    std::lock_guard lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                    return;
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
}

}  // namespace idsq
