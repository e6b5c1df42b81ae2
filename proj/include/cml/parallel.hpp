#pragma once

#include <cstdlib>
#include <exception>
#include <string>
#include <thread>
#include <vector>

namespace cml {

// Worker count: CML_WORKERS env var wins, otherwise hardware concurrency.
inline int worker_count() {
    if (const char* env = std::getenv("CML_WORKERS")) {
        int n = std::atoi(env);
        if (n >= 1) return n;
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

// Runs fn(i) for i in [0, n). Work is split into contiguous blocks; results
// must be written into per-index slots by the caller, which keeps output
// independent of the worker count and schedule.
template <class Fn>
void parallel_for(std::size_t n, Fn&& fn) {
    int workers = worker_count();
    if (workers <= 1 || n < 2) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::size_t blocks = static_cast<std::size_t>(workers);
    std::vector<std::thread> pool;
    pool.reserve(blocks);
    std::vector<std::exception_ptr> errors(blocks);
    for (std::size_t b = 0; b < blocks; ++b) {
        std::size_t lo = n * b / blocks;
        std::size_t hi = n * (b + 1) / blocks;
        pool.emplace_back([&, lo, hi, b] {
            try {
                for (std::size_t i = lo; i < hi; ++i) fn(i);
            } catch (...) {
                errors[b] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

}  // namespace cml
