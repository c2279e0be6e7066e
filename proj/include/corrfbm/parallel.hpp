#pragma once

#include <atomic>
#include <cstdint>
#include <thread>
#include <vector>

#include "corrfbm/stats.hpp"

namespace corrfbm {

inline unsigned default_threads() {
    const unsigned hc = std::thread::hardware_concurrency();
    return hc ? hc : 1;
}

// Replication-parallel driver. Replications are partitioned into fixed blocks;
// worker threads claim whole blocks, so per-block partial results do not depend
// on the thread count. Each replication i draws from stream (master, i).
//
// BlockFn: void(uint64_t rep_begin, uint64_t rep_end, State& state)
// Reduction happens afterwards over the per-block states in index order.
template <class State, class BlockFn>
std::vector<State> run_blocks(std::uint64_t n_reps, std::uint64_t block_size, unsigned threads,
                              BlockFn&& fn) {
    if (block_size == 0) block_size = 1;
    const std::uint64_t n_blocks = (n_reps + block_size - 1) / block_size;
    std::vector<State> states(static_cast<std::size_t>(n_blocks));
    std::atomic<std::uint64_t> next{0};
    auto worker = [&]() {
        for (;;) {
            const std::uint64_t b = next.fetch_add(1);
            if (b >= n_blocks) break;
            const std::uint64_t lo = b * block_size;
            const std::uint64_t hi = std::min(n_reps, lo + block_size);
            fn(lo, hi, states[static_cast<std::size_t>(b)]);
        }
    };
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(threads);
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    return states;
}

// Deterministic mean/variance accumulation of one double per replication.
struct MomentBlock {
    double sum = 0.0;
    double sum_sq = 0.0;
};

template <class RepFn> // double(uint64_t rep)
EstimateWithCI replicate_mean(std::uint64_t n_reps, SeedSpec seed, unsigned threads,
                              std::size_t grid_n, RepFn&& fn, std::uint64_t block_size = 4096) {
    auto blocks = run_blocks<MomentBlock>(n_reps, block_size, threads,
        [&](std::uint64_t lo, std::uint64_t hi, MomentBlock& st) {
            for (std::uint64_t i = lo; i < hi; ++i) {
                const double v = fn(i);
                st.sum += v;
                st.sum_sq += v * v;
            }
        });
    std::vector<double> sums, sqs;
    sums.reserve(blocks.size());
    sqs.reserve(blocks.size());
    for (const auto& b : blocks) { sums.push_back(b.sum); sqs.push_back(b.sum_sq); }
    return EstimateWithCI::from_moments(pairwise_sum(sums), pairwise_sum(sqs), n_reps, seed, grid_n);
}

} // namespace corrfbm
