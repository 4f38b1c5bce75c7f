#pragma once

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <string>
#include <thread>
#include <vector>

namespace pathcalc {

// Worker count for seed ensembles: PATHCALC_THREADS if set, otherwise the
// hardware count. Each task is pure given its index, so scheduling is a plain
// block split.
inline unsigned ensemble_threads() {
    if (const char* env = std::getenv("PATHCALC_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v >= 1) return unsigned(v);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw ? hw : 1;
}

inline void run_parallel(std::size_t n_tasks, const std::function<void(std::size_t)>& task) {
    const unsigned workers = std::min<std::size_t>(ensemble_threads(), n_tasks ? n_tasks : 1);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n_tasks; ++i) task(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w)
        pool.emplace_back([&, w] {
            for (std::size_t i = w; i < n_tasks; i += workers) task(i);
        });
    for (auto& th : pool) th.join();
}

} // namespace pathcalc
