#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace ptfprg {

/// Default worker count: $PTFPRG_JOBS if set, else the hardware concurrency.
inline unsigned default_jobs()
{
    if (const char *env = std::getenv("PTFPRG_JOBS")) {
        try {
            const long v = std::stol(env);
            if (v >= 1) {
                return static_cast<unsigned>(v);
            }
        } catch (const std::exception &) {
        }
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

/// Runs f(chunk) for chunk in [0, n_chunks) on up to `jobs` threads.
///
/// Chunks are claimed from a shared counter; callers write results into
/// per-chunk slots and reduce them in chunk order, so the outcome does not
/// depend on the number of threads or their schedule.
template <typename F>
void for_each_chunk(std::size_t n_chunks, unsigned jobs, F &&f)
{
    const unsigned workers = static_cast<unsigned>(
        std::min<std::size_t>(std::max(1u, jobs), n_chunks));
    if (workers <= 1) {
        for (std::size_t c = 0; c < n_chunks; ++c) {
            f(c);
        }
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&] {
        for (std::size_t c = next++; c < n_chunks; c = next++) {
            try {
                f(c);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) {
                    error = std::current_exception();
                }
                next = n_chunks;
            }
        }
    };
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back(worker);
    }
    pool.clear();
    if (error) {
        std::rethrow_exception(error);
    }
}

/// Trial range [begin, end) of one chunk.
struct ChunkRange {
    std::uint64_t begin;
    std::uint64_t end;
};

inline std::size_t chunk_count(std::uint64_t trials, std::uint64_t chunk_size)
{
    return static_cast<std::size_t>((trials + chunk_size - 1) / chunk_size);
}

inline ChunkRange chunk_range(std::size_t chunk, std::uint64_t trials, std::uint64_t chunk_size)
{
    const std::uint64_t b = chunk * chunk_size;
    return {b, std::min(trials, b + chunk_size)};
}

} // namespace ptfprg
