#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace neatduel {

// Runs fn(i) for i in [0, count) on up to `workers` threads. Work items must
// write only to their own slot; the result is then independent of schedule.
template <typename Fn>
void parallel_for(std::size_t count, unsigned workers, Fn&& fn) {
    const auto threads = static_cast<std::size_t>(std::max(1U, workers));
    if (threads == 1 || count < 2) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
            try {
                fn(i);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        }
    };
    std::vector<std::jthread> pool;
    const auto spawned = std::min(threads, count) - 1;
    pool.reserve(spawned);
    for (std::size_t t = 0; t < spawned; ++t) pool.emplace_back(worker);
    worker();
    pool.clear();
    if (failure) std::rethrow_exception(failure);
}

}  // namespace neatduel
