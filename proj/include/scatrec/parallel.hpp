#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <optional>
#include <thread>
#include <type_traits>
#include <vector>

namespace scatrec {

// Worker count from a request: 0 means hardware concurrency (at least 1).
inline int resolve_workers(int requested) {
    if (requested > 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

// out[i] = fn(i) for i < n, evaluated on up to `workers` threads pulling
// indices from a shared counter. The output order is the index order no
// matter which thread ran which job. If jobs throw, the exception of the
// lowest failing index is rethrown after all workers have stopped.
template <class Fn>
auto parallel_map(std::size_t n, int workers, Fn&& fn) -> std::vector<std::invoke_result_t<Fn&, std::size_t>> {
    using R = std::invoke_result_t<Fn&, std::size_t>;
    std::vector<std::optional<R>> slots(n);
    std::vector<std::exception_ptr> errors(n);
    std::atomic<std::size_t> next{0};

    auto worker = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            try {
                slots[i].emplace(fn(i));
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };

    const int w = std::max(1, std::min<int>(resolve_workers(workers), static_cast<int>(n)));
    if (w == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(w);
        for (int t = 0; t < w; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);

    std::vector<R> out;
    out.reserve(n);
    for (auto& s : slots) out.push_back(std::move(*s));
    return out;
}

}  // namespace scatrec
