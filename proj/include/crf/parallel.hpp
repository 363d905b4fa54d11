#ifndef CRITFOREST_PARALLEL_HPP
#define CRITFOREST_PARALLEL_HPP

#include <cstdint>
#include <thread>
#include <vector>

namespace crf {

/// Runs fn(index) for index in [0, count) across `threads` workers, statically
/// chunked by index. Results must be written into per-index slots so the
/// outcome is identical for any thread count.
template <typename Fn>
void parallel_for_index(std::int64_t count, int threads, Fn&& fn) {
    if (threads <= 1 || count <= 1) {
        for (std::int64_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    std::int64_t chunk = (count + threads - 1) / threads;
    for (int t = 0; t < threads; ++t) {
        std::int64_t lo = static_cast<std::int64_t>(t) * chunk;
        std::int64_t hi = lo + chunk < count ? lo + chunk : count;
        if (lo >= hi) break;
        pool.emplace_back([lo, hi, &fn]() {
            for (std::int64_t i = lo; i < hi; ++i) fn(i);
        });
    }
    for (auto& th : pool) th.join();
}

inline int default_thread_count() {
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

} // namespace crf

#endif
