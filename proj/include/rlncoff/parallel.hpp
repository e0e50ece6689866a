#pragma once

#include <atomic>
#include <cstdlib>
#include <cstring>
#include <string>
#include <thread>
#include <vector>

namespace rlncoff {

// Worker count: explicit override first, then RLNC_OFFLOAD_THREADS
// (0 = auto), then hardware concurrency.
inline std::size_t worker_count(std::size_t override_workers = 0) {
    if (override_workers > 0) return override_workers;
    if (const char* env = std::getenv("RLNC_OFFLOAD_THREADS")) {
        char* end = nullptr;
        const unsigned long v = std::strtoul(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) return std::size_t(v);
    }
    const unsigned hc = std::thread::hardware_concurrency();
    return hc > 0 ? hc : 1;
}

// Runs fn(chunk_index, begin, end) over [0, count) split into fixed chunks.
// Chunk boundaries do not depend on the worker count, so callers can reduce
// per-chunk results in chunk order and get identical totals serial or not.
template <typename Fn>
void for_each_chunk(std::size_t count, std::size_t chunk_size, std::size_t workers,
                    Fn&& fn) {
    if (count == 0) return;
    if (chunk_size == 0) chunk_size = 1;
    const std::size_t chunks = (count + chunk_size - 1) / chunk_size;
    const std::size_t threads = std::min(workers > 0 ? workers : 1, chunks);
    if (threads <= 1) {
        for (std::size_t i = 0; i < chunks; ++i)
            fn(i, i * chunk_size, std::min(count, (i + 1) * chunk_size));
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t)
        pool.emplace_back([&] {
            for (std::size_t i = next.fetch_add(1); i < chunks; i = next.fetch_add(1))
                fn(i, i * chunk_size, std::min(count, (i + 1) * chunk_size));
        });
    for (auto& th : pool) th.join();
}

}  // namespace rlncoff
