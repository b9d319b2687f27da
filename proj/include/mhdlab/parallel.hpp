#pragma once

#include <atomic>
#include <thread>
#include <vector>

namespace mhdlab {

// Index-parallel loop; results must be written to per-index slots so the
// outcome is identical for any worker count.
template <class Fn>
void parallel_for(std::size_t count, int jobs, const Fn& fn) {
    if (jobs <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= count) return;
            fn(i);
        }
    };
    std::vector<std::thread> pool;
    int nthreads = std::min<std::size_t>(jobs, count);
    for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
}

}  // namespace mhdlab
