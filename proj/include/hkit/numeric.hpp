#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <thread>
#include <vector>

namespace hkit {

// Sum in a fixed pairwise (tree) order. The result depends only on the
// element order, never on chunking or thread count, and the error grows
// like O(log n) instead of O(n).
double pairwise_sum(std::span<const double> v);

// Number of worker threads: explicit setter wins, then HKIT_THREADS,
// then hardware concurrency capped at 8.
int thread_count();
void set_thread_count(int n); // 0 = auto

// Static partition of [0, count) over the configured threads. fn must be
// pure per index; any write pattern keyed by index stays deterministic.
void parallel_for(std::size_t count, const std::function<void(std::size_t, std::size_t)>& range_fn);

// --- portable RNG -----------------------------------------------------
//
// Report bytes must not depend on the standard library, so distributions
// are hand-rolled on top of SplitMix64 (a fixed, documented generator).

struct SplitMix64 {
    std::uint64_t state;

    explicit SplitMix64(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // uniform in [0, 1), 53-bit resolution
    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // uniform in [a, b)
    double uniform(double a, double b) { return a + (b - a) * uniform01(); }

    // standard normal (Box-Muller, always consumes two uniforms)
    double normal();
};

// Independent substream for task `index` of a seeded run.
SplitMix64 substream(std::uint64_t seed, std::uint64_t index);

} // namespace hkit
