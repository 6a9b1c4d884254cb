#pragma once

#include <algorithm>
#include <thread>
#include <vector>

namespace nullwave::detail {

// Splits [first, last) into `threads` contiguous slabs, one per thread. The
// split depends only on the counts, so per-index results are reproducible.
template <typename Fn>
void for_slabs(int threads, int first, int last, Fn&& fn) {
    const int count = last - first;
    const int t = std::clamp(threads, 1, std::max(1, count));
    if (t == 1) {
        fn(first, last);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(t - 1));
    auto bounds = [&](int idx) { return first + static_cast<int>(static_cast<long long>(count) * idx / t); };
    for (int idx = 1; idx < t; ++idx) pool.emplace_back([&, idx] { fn(bounds(idx), bounds(idx + 1)); });
    fn(bounds(0), bounds(1));
    for (auto& th : pool) th.join();
}

}  // namespace nullwave::detail
