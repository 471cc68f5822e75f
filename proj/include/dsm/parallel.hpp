/**
 * @file parallel.hpp
 * @brief Static-partition parallel loop and thread-count resolution.
 */
#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <string>
#include <thread>
#include <vector>

namespace dsm {

/// Environment variable consulted when no explicit thread count is given.
inline constexpr const char* threads_env_var = "HELIO_DSM_THREADS";

/// requested > 0 wins; otherwise HELIO_DSM_THREADS; otherwise the hardware count.
inline unsigned resolve_threads(unsigned requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv(threads_env_var)) {
        try {
            const long v = std::stol(env);
            if (v > 0) return static_cast<unsigned>(v);
        } catch (const std::exception&) {
        }
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

/// Calls fn(i) for i in [0, count). Each index is handled by exactly one
/// thread, so per-index results never depend on the thread count.
template <class Fn>
void parallel_for(std::size_t count, unsigned threads, Fn&& fn) {
    threads = std::max(1u, threads);
    if (threads == 1 || count < 2) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    const std::size_t workers = std::min<std::size_t>(threads, count);
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(workers);
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (std::size_t i = w; i < count; i += workers) fn(i);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

}  // namespace dsm
