// Copyright 2026 The relaylab Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace relaylab::detail
{
//! Slots per work unit. Fixed so reductions do not depend on thread count.
inline constexpr std::uint64_t chunk_slots = 1 << 16;

inline unsigned resolve_threads(unsigned requested)
{
    if (requested != 0)
        return requested;
    return std::max(1u, std::thread::hardware_concurrency());
}

inline std::uint64_t chunk_count(std::uint64_t slots)
{
    return (slots + chunk_slots - 1) / chunk_slots;
}

/*!
 * Run fn(chunk) for every chunk in [0, chunks) on up to `threads` workers.
 *
 * Chunks are claimed dynamically; callers write per-chunk results into
 * preallocated storage and reduce them in chunk order afterwards.
 */
template<class F>
void for_each_chunk(std::uint64_t chunks, unsigned threads, F&& fn)
{
    threads = static_cast<unsigned>(std::min<std::uint64_t>(resolve_threads(threads), chunks));
    if (threads <= 1)
    {
        for (std::uint64_t c = 0; c < chunks; ++c)
            fn(c);
        return;
    }

    std::atomic<std::uint64_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&] {
        try
        {
            for (std::uint64_t c = next++; c < chunks; c = next++)
                fn(c);
        }
        catch (...)
        {
            std::lock_guard lock(error_mutex);
            if (!error)
                error = std::current_exception();
            next = chunks;
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t)
        pool.emplace_back(worker);
    for (auto& t : pool)
        t.join();
    if (error)
        std::rethrow_exception(error);
}

}  // namespace relaylab::detail
