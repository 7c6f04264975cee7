#pragma once

#include <cstddef>
#include <cstdlib>
#include <thread>
#include <vector>

namespace groupfb {

/// Worker cap for data-parallel loops. GROUPFB_THREADS=0 or unset means
/// hardware concurrency.
inline unsigned max_threads() {
    unsigned cap = 0;
    if (const char* env = std::getenv("GROUPFB_THREADS")) {
        long v = std::strtol(env, nullptr, 10);
        if (v > 0) cap = static_cast<unsigned>(v);
    }
    if (cap == 0) {
        cap = std::thread::hardware_concurrency();
        if (cap == 0) cap = 1;
    }
    return cap;
}

/// Runs fn(i) for i in [0, count). Independent iterations only; results must
/// be written to disjoint slots so the merged output is schedule-invariant.
template <typename Fn>
void parallel_for(std::size_t count, Fn&& fn, std::size_t grain = 8) {
    const unsigned workers =
        static_cast<unsigned>(std::min<std::size_t>(max_threads(), (count + grain - 1) / grain));
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    const std::size_t chunk = (count + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
        const std::size_t lo = w * chunk;
        const std::size_t hi = std::min(count, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([lo, hi, &fn] {
            for (std::size_t i = lo; i < hi; ++i) fn(i);
        });
    }
    for (auto& t : pool) t.join();
}

} // namespace groupfb
