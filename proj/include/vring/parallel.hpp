#pragma once

#include <algorithm>
#include <thread>
#include <vector>

namespace vring {

// Runs fn(begin, end) over a fixed contiguous partition of [0, n).
// The partition depends only on (n, threads), and each output element is
// written by exactly one worker, so results are identical for any thread
// count; threads only change wall time.
template <class Fn>
void parallel_for_chunks(int n, int threads, Fn&& fn) {
    if (n <= 0) return;
    threads = std::max(1, std::min(threads, n));
    if (threads == 1) {
        fn(0, n);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(threads));
    const int base = n / threads, rem = n % threads;
    int begin = 0;
    for (int t = 0; t < threads; ++t) {
        const int len = base + (t < rem ? 1 : 0);
        const int end = begin + len;
        pool.emplace_back([&fn, begin, end] { fn(begin, end); });
        begin = end;
    }
    for (auto& th : pool) th.join();
}

} // namespace vring
