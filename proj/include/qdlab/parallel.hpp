#pragma once

#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace qdlab {

inline unsigned effective_threads(unsigned requested) {
    if (requested > 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? hw : 1;
}

// Static chunking: fn(begin, end, chunk_index) over [0, n). Results must be
// written to per-chunk slots so the merge order is fixed regardless of the
// thread count.
inline void parallel_chunks(std::size_t n, unsigned threads,
                            const std::function<void(std::size_t, std::size_t,
                                                     unsigned)>& fn) {
    const unsigned t = effective_threads(threads);
    if (t <= 1 || n < 2) {
        fn(0, n, 0);
        return;
    }
    const unsigned chunks = t;
    std::vector<std::thread> pool;
    pool.reserve(chunks);
    const std::size_t step = (n + chunks - 1) / chunks;
    for (unsigned c = 0; c < chunks; ++c) {
        const std::size_t lo = c * step;
        const std::size_t hi = std::min(n, lo + step);
        if (lo >= hi) break;
        pool.emplace_back([&fn, lo, hi, c] { fn(lo, hi, c); });
    }
    for (auto& th : pool) th.join();
}

}  // namespace qdlab
