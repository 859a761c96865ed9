#pragma once

#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace affdim {

// Worker count from AFFDIM_THREADS (>=1), defaulting to 1. The count changes
// wall time only; all reductions happen in fixed index order afterwards.
inline int default_worker_count() {
    if (const char* env = std::getenv("AFFDIM_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v >= 1) return static_cast<int>(v);
    }
    return 1;
}

// Static contiguous partition of [0, count) across workers; fn(i) must write
// only to slot i of preallocated output.
inline void parallel_for(long count, int workers, const std::function<void(long)>& fn) {
    if (workers <= 0) workers = default_worker_count();
    if (workers == 1 || count <= 1) {
        for (long i = 0; i < count; ++i) fn(i);
        return;
    }
    workers = static_cast<int>(std::min<long>(workers, count));
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(workers));
    for (int w = 0; w < workers; ++w) {
        const long lo = count * w / workers;
        const long hi = count * (w + 1) / workers;
        pool.emplace_back([lo, hi, &fn] {
            for (long i = lo; i < hi; ++i) fn(i);
        });
    }
    for (auto& t : pool) t.join();
}

}  // namespace affdim
