#pragma once

#include <atomic>
#include <cstdlib>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace trp {

/// Worker cap: TRP_WORKERS when set, else hardware concurrency.
inline int worker_count() {
    if (const char* env = std::getenv("TRP_WORKERS")) {
        const int n = std::atoi(env);
        if (n >= 1) return n;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

/// Runs fn(i) for i in [0, n) on up to `workers` threads.  Results must be
/// written to index-addressed slots; exceptions propagate from the first
/// failing index.
inline void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn,
                         int workers = worker_count()) {
    if (n == 0) return;
    if (workers <= 1 || n == 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> cursor{0};
    std::vector<std::thread> pool;
    std::exception_ptr error;
    std::mutex error_mu;
    const int count = static_cast<int>(std::min<std::size_t>(workers, n));
    for (int w = 0; w < count; ++w)
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t i = cursor.fetch_add(1);
                if (i >= n) return;
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mu);
                    if (!error) error = std::current_exception();
                    return;
                }
            }
        });
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

} // namespace trp
