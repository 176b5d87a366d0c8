#pragma once

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace gwleaf {

// Worker count: GWLEAF_THREADS when set and positive, otherwise the hardware
// concurrency.
unsigned worker_count();

// Calls f(index, worker) for every index in [0, count). Work is handed out
// dynamically; results must be written by index so that they do not depend on
// scheduling. The exception of the smallest failing index is rethrown.
template <class F>
void parallel_for(long count, unsigned workers, F&& f) {
    workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(std::max<long>(count, 1))));
    std::atomic<long> next{0};
    std::mutex guard;
    long failed_at = count;
    std::exception_ptr failure;
    auto body = [&](unsigned worker) {
        while (true) {
            const long i = next.fetch_add(1);
            if (i >= count) return;
            try {
                f(i, worker);
            } catch (...) {
                std::lock_guard<std::mutex> lock(guard);
                if (i < failed_at) {
                    failed_at = i;
                    failure = std::current_exception();
                }
                next.store(count);
                return;
            }
        }
    };
    if (workers == 1) {
        body(0);
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(body, w);
        for (auto& t : pool) t.join();
    }
    if (failure) std::rethrow_exception(failure);
}

}  // namespace gwleaf
