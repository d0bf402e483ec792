#pragma once

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <thread>
#include <vector>

namespace mlc {

// Worker count resolution: explicit request > ML_WORKERS env > hardware.
inline int resolve_workers(int requested = 0) {
    int n = requested;
    if (n <= 0) {
        if (const char* env = std::getenv("ML_WORKERS")) {
            n = std::atoi(env);
        }
    }
    if (n <= 0) n = static_cast<int>(std::thread::hardware_concurrency());
    if (n <= 0) n = 1;
    return n;
}

// Deterministic parallel map-reduce over [0, n).
//
// The range is split into fixed-size chunks whose boundaries depend only on
// `n` and `chunk` — never on the worker count — and chunk results are merged
// in ascending chunk order. Hence the reduction result is bit-identical for
// any number of workers, provided `map` is a pure function of its range and
// `merge` is applied left-to-right.
//
//   map(begin, end) -> R     (processes indices in ascending order)
//   merge(acc&, R&&, chunk_index)
template <typename R, typename MapFn, typename MergeFn>
R parallel_chunk_reduce(std::size_t n, R init, std::size_t chunk, int workers,
                        MapFn&& map, MergeFn&& merge) {
    if (chunk == 0) chunk = 1;
    const std::size_t nchunks = n == 0 ? 0 : (n + chunk - 1) / chunk;
    workers = resolve_workers(workers);

    if (nchunks <= 1 || workers == 1) {
        R acc = std::move(init);
        for (std::size_t c = 0; c < nchunks; ++c) {
            const std::size_t b = c * chunk;
            const std::size_t e = b + chunk < n ? b + chunk : n;
            merge(acc, map(b, e), c);
        }
        return acc;
    }

    std::vector<R> results(nchunks);
    std::vector<std::exception_ptr> errors(nchunks);
    std::atomic<std::size_t> cursor{0};
    auto worker = [&] {
        for (;;) {
            const std::size_t c = cursor.fetch_add(1);
            if (c >= nchunks) break;
            const std::size_t b = c * chunk;
            const std::size_t e = b + chunk < n ? b + chunk : n;
            try {
                results[c] = map(b, e);
            } catch (...) {
                errors[c] = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    const int spawn = workers < static_cast<int>(nchunks) ? workers : static_cast<int>(nchunks);
    pool.reserve(static_cast<std::size_t>(spawn));
    for (int t = 0; t < spawn; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();

    // Rethrow the error of the lowest failing chunk so the surfaced failure
    // does not depend on thread scheduling.
    for (std::size_t c = 0; c < nchunks; ++c)
        if (errors[c]) std::rethrow_exception(errors[c]);

    R acc = std::move(init);
    for (std::size_t c = 0; c < nchunks; ++c) merge(acc, std::move(results[c]), c);
    return acc;
}

} // namespace mlc
