#pragma once

#include <atomic>
#include <thread>
#include <vector>

namespace ifs {

// Runs fn(task) for task = 0..n_tasks-1 on up to `threads` workers.
// Tasks must be independent; results should be written to per-task
// slots so the assembled output does not depend on the thread count.
template <typename Fn>
void parallel_for(long n_tasks, int threads, Fn&& fn) {
    if (threads <= 1 || n_tasks <= 1) {
        for (long i = 0; i < n_tasks; ++i) fn(i);
        return;
    }
    std::atomic<long> next{0};
    auto worker = [&] {
        for (;;) {
            long i = next.fetch_add(1);
            if (i >= n_tasks) break;
            fn(i);
        }
    };
    std::vector<std::thread> pool;
    int n_workers = static_cast<int>(std::min<long>(threads, n_tasks));
    pool.reserve(static_cast<std::size_t>(n_workers));
    for (int t = 0; t < n_workers; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
}

}  // namespace ifs
