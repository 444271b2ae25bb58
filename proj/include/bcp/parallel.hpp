#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace bcp {

inline std::atomic<unsigned>& thread_count()
{
    static std::atomic<unsigned> n{std::max(1u, std::thread::hardware_concurrency())};
    return n;
}

inline void set_threads(unsigned n) { thread_count() = std::max(1u, n); }

/// f(i) for i in [0,n). Callers write results by index and reduce afterwards in index order,
/// so outputs do not depend on the thread count.
template<typename F>
void parallel_for(std::size_t n, F&& f)
{
    unsigned nt = std::min<std::size_t>(thread_count().load(), n);
    if (nt <= 1) {
        for (std::size_t i = 0; i < n; ++i) f(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr err;
    std::atomic<bool> failed{false};
    auto work = [&] {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= n || failed.load()) return;
            try {
                f(i);
            } catch (...) {
                if (!failed.exchange(true)) err = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < nt; ++t) pool.emplace_back(work);
    work();
    for (auto& th : pool) th.join();
    if (err) std::rethrow_exception(err);
}

template<typename F>
auto parallel_map(std::size_t n, F&& f)
{
    using R = decltype(f(std::size_t{}));
    std::vector<R> out(n);
    parallel_for(n, [&](std::size_t i) { out[i] = f(i); });
    return out;
}

}
