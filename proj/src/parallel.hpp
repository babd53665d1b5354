// Index-parallel map with deterministic, index-ordered results and errors.
#pragma once

#include <algorithm>
#include <atomic>
#include <exception>
#include <thread>
#include <vector>

namespace vsi::detail {

template <class T, class F>
std::vector<T> parallel_map(int n, int threads, F&& f) {
    std::vector<T> out(static_cast<size_t>(n));
    std::vector<std::exception_ptr> errors(static_cast<size_t>(n));
    std::atomic<int> next{0};
    auto worker = [&] {
        for (int i = next++; i < n; i = next++) {
            try {
                out[static_cast<size_t>(i)] = f(i);
            } catch (...) {
                errors[static_cast<size_t>(i)] = std::current_exception();
            }
        }
    };
    const int nt = std::max(1, std::min(threads, n));
    if (nt == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < nt; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    // lowest failing index wins, independent of scheduling
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    return out;
}

} // namespace vsi::detail
