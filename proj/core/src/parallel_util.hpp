#ifndef GRAPHKM_PARALLEL_UTIL_HPP
#define GRAPHKM_PARALLEL_UTIL_HPP

#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

namespace graphkm::detail {

// Runs fn(begin, end) over contiguous chunks of [0, n). Work items must be
// independent per index; chunking is deterministic, so any schedule yields
// the same result. threads <= 1 degenerates to a direct call.
template <typename Fn>
void parallel_for(std::size_t n, int threads, Fn&& fn) {
    if (threads <= 1 || n <= 1) {
        if (n > 0) fn(std::size_t{0}, n);
        return;
    }
    const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(threads), n);
    const std::size_t chunk = (n + workers - 1) / workers;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t begin = w * chunk;
        const std::size_t end = std::min(n, begin + chunk);
        if (begin >= end) break;
        pool.emplace_back([&fn, begin, end] { fn(begin, end); });
    }
    for (auto& t : pool) t.join();
}

}  // namespace graphkm::detail

#endif
