#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace coco {

/// Paths are grouped into fixed-size blocks; reductions walk the blocks in index order so the
/// result is independent of the thread count.
inline constexpr std::size_t kPathBlock = 4096;

inline unsigned resolve_threads(unsigned requested) {
    if (requested > 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

/// Calls fn(block, begin, end) for every block of [0, n). Blocks are claimed dynamically; fn
/// must write only to per-block state. The first exception thrown by any block is rethrown.
template <class Fn>
void for_each_block(std::size_t n, unsigned threads, Fn&& fn, std::size_t block = kPathBlock) {
    const std::size_t n_blocks = (n + block - 1) / block;
    threads = static_cast<unsigned>(std::min<std::size_t>(resolve_threads(threads), n_blocks));
    auto run_block = [&](std::size_t b) { fn(b, b * block, std::min(n, (b + 1) * block)); };
    if (threads <= 1) {
        for (std::size_t b = 0; b < n_blocks; ++b) run_block(b);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned w = 0; w < threads; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t b = next.fetch_add(1);
                if (b >= n_blocks) return;
                try {
                    run_block(b);
                } catch (...) {
                    std::lock_guard lock(error_mutex);
                    if (!error) error = std::current_exception();
                    next = n_blocks;
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

inline std::size_t block_count(std::size_t n, std::size_t block = kPathBlock) {
    return (n + block - 1) / block;
}

} // namespace coco
