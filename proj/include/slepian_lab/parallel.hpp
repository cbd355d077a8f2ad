#ifndef SLEPIAN_LAB_PARALLEL_HPP
#define SLEPIAN_LAB_PARALLEL_HPP

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace slepian_lab::parallel {

/// Worker count: explicit request > SLEPIAN_LAB_THREADS > hardware.
inline unsigned thread_count(unsigned requested = 0) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("SLEPIAN_LAB_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v > 0) return static_cast<unsigned>(v);
    }
    const unsigned hc = std::thread::hardware_concurrency();
    return hc ? hc : 1;
}

/// Runs fn(i) for every i in [0, count) across a worker pool. Each index
/// must write only to its own output slots; callers reduce serially in
/// index order afterwards, so results are independent of the thread count.
template <typename Fn>
void for_each_index(std::size_t count, Fn&& fn, unsigned threads = 0) {
    const unsigned t = std::min<std::size_t>(thread_count(threads), count ? count : 1);
    if (t <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr first_error;
    std::mutex error_mtx;
    const std::size_t chunk = std::max<std::size_t>(1, count / (static_cast<std::size_t>(t) * 64));
    auto work = [&]() {
        for (;;) {
            const std::size_t begin = next.fetch_add(chunk);
            if (begin >= count || failed.load(std::memory_order_relaxed)) return;
            const std::size_t end = std::min(count, begin + chunk);
            try {
                for (std::size_t i = begin; i < end; ++i) fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mtx);
                if (!first_error) first_error = std::current_exception();
                failed.store(true, std::memory_order_relaxed);
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(t);
    for (unsigned k = 0; k < t; ++k) pool.emplace_back(work);
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

}  // namespace slepian_lab::parallel

#endif
