#pragma once

#include <atomic>
#include <cstdlib>
#include <thread>
#include <vector>

namespace horokit {

// Worker threads for data-parallel loops.  HOROKIT_THREADS overrides the
// hardware count; all reductions are combined in chunk order, so results are
// bit-identical regardless of this value.
inline unsigned worker_count() {
    if (const char* env = std::getenv("HOROKIT_THREADS")) {
        long v = std::atol(env);
        if (v >= 1) return static_cast<unsigned>(v);
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

// Splits [0, n) into fixed-size chunks, evaluates `fn(begin, end)` per chunk
// (possibly on several threads), then folds the per-chunk results into `init`
// with `combine` in ascending chunk order.  Chunk boundaries depend only on
// (n, chunk_size), never on the worker count, which keeps floating-point
// reductions deterministic.
template <class T, class ChunkFn, class CombineFn>
T chunked_reduce(std::size_t n, std::size_t chunk_size, T init, ChunkFn fn, CombineFn combine) {
    if (n == 0) return init;
    if (chunk_size == 0) chunk_size = 1;
    const std::size_t num_chunks = (n + chunk_size - 1) / chunk_size;
    std::vector<T> results(num_chunks, init);

    const unsigned workers = std::min<std::size_t>(worker_count(), num_chunks);
    if (workers <= 1) {
        for (std::size_t k = 0; k < num_chunks; ++k) {
            std::size_t b = k * chunk_size;
            results[k] = fn(b, std::min(n, b + chunk_size));
        }
    } else {
        std::atomic<std::size_t> next{0};
        auto work = [&] {
            for (;;) {
                std::size_t k = next.fetch_add(1);
                if (k >= num_chunks) return;
                std::size_t b = k * chunk_size;
                results[k] = fn(b, std::min(n, b + chunk_size));
            }
        };
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned i = 0; i < workers; ++i) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }

    T acc = init;
    for (std::size_t k = 0; k < num_chunks; ++k) acc = combine(acc, results[k]);
    return acc;
}

}  // namespace horokit
