#pragma once
#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace nidsbench {

namespace detail {
inline std::atomic<unsigned>& thread_setting() {
    static std::atomic<unsigned> n{0};
    return n;
}
inline thread_local bool in_parallel_region = false;
} // namespace detail

// 0 selects std::thread::hardware_concurrency().
inline void set_thread_count(unsigned n) { detail::thread_setting().store(n); }

inline unsigned thread_count() {
    unsigned n = detail::thread_setting().load();
    if (n == 0) n = std::max(1u, std::thread::hardware_concurrency());
    return n;
}

// Runs body(i) for i in [0, n). Each index must write only to its own output
// slot; results are then independent of the schedule. Nested calls run inline
// on the calling worker. The first exception thrown is rethrown.
template <class Body>
void parallel_for(std::size_t n, Body&& body) {
    const unsigned workers = detail::in_parallel_region ? 1u : std::min<std::size_t>(thread_count(), n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto work = [&] {
        detail::in_parallel_region = true;
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n) break;
            try {
                body(i);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) error = std::current_exception();
                next.store(n);
            }
        }
        detail::in_parallel_region = false;
    };
    std::vector<std::jthread> pool;
    pool.reserve(workers - 1);
    for (unsigned w = 1; w < workers; ++w) pool.emplace_back(work);
    work();
    pool.clear();
    if (error) std::rethrow_exception(error);
}

} // namespace nidsbench
