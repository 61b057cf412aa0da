#pragma once

#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace birkhoff {

inline unsigned worker_count(std::size_t jobs) {
    unsigned hw = std::thread::hardware_concurrency();
    if (hw == 0) hw = 1;
    if (const char* env = std::getenv("BIRKHOFF_THREADS")) {
        long v = std::strtol(env, nullptr, 10);
        if (v >= 1 && v < long(hw)) hw = unsigned(v);
    }
    if (jobs < hw) hw = unsigned(jobs ? jobs : 1);
    return hw;
}

// Static block partition over [0, count). Each index is processed exactly
// once and writes only its own slot, so results are schedule-independent.
template <class Fn>
void parallel_for(std::size_t count, Fn fn) {
    if (count == 0) return;
    unsigned workers = worker_count(count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    std::size_t chunk = (count + workers - 1) / workers;
    std::exception_ptr first_error;
    std::mutex error_mutex;
    for (unsigned w = 0; w < workers; ++w) {
        std::size_t lo = std::size_t(w) * chunk;
        std::size_t hi = std::min(count, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([lo, hi, &fn, &first_error, &error_mutex] {
            try {
                for (std::size_t i = lo; i < hi; ++i) fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

}  // namespace birkhoff
