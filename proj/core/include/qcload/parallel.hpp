// Deterministic work sharding: results must not depend on the worker count,
// so work is cut into a fixed number of chunks and reduced in chunk order.
#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <span>
#include <thread>
#include <vector>

namespace qcload {

// splitmix64 finalizer; used to derive independent per-chunk RNG seeds.
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

struct ChunkRange {
    std::size_t chunk = 0;
    std::size_t begin = 0;
    std::size_t end = 0;
};

// Runs fn over a fixed decomposition of [0, n) into n_chunks ranges.
// Workers pull chunk indices from a shared counter; the decomposition (and
// therefore anything written per-chunk) is independent of `workers`.
inline void for_chunks(std::size_t n, std::size_t n_chunks, int workers,
                       const std::function<void(const ChunkRange &)> &fn) {
    if (n == 0) return;
    if (n_chunks == 0) n_chunks = 1;
    if (n_chunks > n) n_chunks = n;
    std::atomic<std::size_t> next{0};
    auto run = [&]() {
        for (;;) {
            std::size_t c = next.fetch_add(1);
            if (c >= n_chunks) return;
            ChunkRange r;
            r.chunk = c;
            r.begin = c * n / n_chunks;
            r.end = (c + 1) * n / n_chunks;
            fn(r);
        }
    };
    if (workers <= 1) {
        run();
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) pool.emplace_back(run);
    for (auto &t : pool) t.join();
}

// Pairwise summation in a fixed tree order; bitwise reproducible for a given
// input order regardless of how the values were produced.
inline double pairwise_sum(std::span<const double> v) {
    if (v.size() <= 8) {
        double s = 0.0;
        for (double x : v) s += x;
        return s;
    }
    std::size_t half = v.size() / 2;
    return pairwise_sum(v.subspan(0, half)) + pairwise_sum(v.subspan(half));
}

// Minimum with deterministic lowest-index tie-break.
struct IndexedMin {
    double value = 0.0;
    std::size_t index = 0;
    bool empty = true;

    void add(double v, std::size_t i) {
        if (empty || v < value || (v == value && i < index)) {
            value = v;
            index = i;
            empty = false;
        }
    }
    void merge(const IndexedMin &o) {
        if (!o.empty) add(o.value, o.index);
    }
};

}  // namespace qcload
