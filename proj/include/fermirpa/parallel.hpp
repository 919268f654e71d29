#pragma once

#include <cstdint>
#include <functional>
#include <thread>
#include <vector>

namespace fermirpa {

// Static-chunk parallel map over [0, n).  Every index is computed exactly once
// into caller-owned slots, so results do not depend on the schedule; with
// threads <= 1 the loop runs inline.
inline void parallel_for(std::int64_t n, int threads,
                         const std::function<void(std::int64_t)>& fn) {
    if (n <= 0) return;
    if (threads <= 1 || n == 1) {
        for (std::int64_t i = 0; i < n; ++i) fn(i);
        return;
    }
    int nt = static_cast<int>(std::min<std::int64_t>(threads, n));
    std::vector<std::thread> pool;
    pool.reserve(nt);
    for (int t = 0; t < nt; ++t) {
        pool.emplace_back([&, t] {
            for (std::int64_t i = t; i < n; i += nt) fn(i);
        });
    }
    for (auto& th : pool) th.join();
}

} // namespace fermirpa
