#ifndef GK_PARALLEL_HPP
#define GK_PARALLEL_HPP

#include <thread>
#include <vector>

#include "gk/gf.hpp"

namespace gk {

/// Runs fn(chunk_index, begin, end) over a contiguous partition of [begin,
/// end) on `threads` workers. Chunks are fixed up-front so per-chunk results
/// can be merged in chunk order for deterministic output.
template <class Fn>
void parallel_chunks(u64 begin, u64 end, int threads, Fn&& fn) {
    if (end <= begin) return;
    u64 total = end - begin;
    int nthreads = threads < 1 ? 1 : threads;
    if (u64(nthreads) > total) nthreads = int(total);
    if (nthreads == 1) {
        fn(0, begin, end);
        return;
    }
    u64 chunk = total / nthreads, rem = total % nthreads;
    std::vector<std::thread> pool;
    u64 at = begin;
    for (int t = 0; t < nthreads; ++t) {
        u64 len = chunk + (u64(t) < rem ? 1 : 0);
        u64 b = at, e = at + len;
        at = e;
        pool.emplace_back([&fn, t, b, e] { fn(t, b, e); });
    }
    for (auto& th : pool) th.join();
}

inline int chunk_count(u64 begin, u64 end, int threads) {
    if (end <= begin) return 0;
    u64 total = end - begin;
    int nthreads = threads < 1 ? 1 : threads;
    if (u64(nthreads) > total) nthreads = int(total);
    return nthreads;
}

} // namespace gk

#endif
