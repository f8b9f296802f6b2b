#include "hkit/numeric.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <numbers>

namespace hkit {

namespace {

double pairwise_sum_impl(const double* v, std::size_t n) {
    if (n <= 8) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += v[i];
        return s;
    }
    const std::size_t half = n / 2;
    return pairwise_sum_impl(v, half) + pairwise_sum_impl(v + half, n - half);
}

std::atomic<int> g_threads{0};

int resolve_threads() {
    if (const char* env = std::getenv("HKIT_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0) return n;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return static_cast<int>(std::clamp(hw, 1u, 8u));
}

} // namespace

double pairwise_sum(std::span<const double> v) {
    return pairwise_sum_impl(v.data(), v.size());
}

int thread_count() {
    const int n = g_threads.load(std::memory_order_relaxed);
    return n > 0 ? n : resolve_threads();
}

void set_thread_count(int n) {
    g_threads.store(n > 0 ? n : 0, std::memory_order_relaxed);
}

void parallel_for(std::size_t count, const std::function<void(std::size_t, std::size_t)>& range_fn) {
    const int workers = static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(thread_count()), count));
    if (workers <= 1 || count == 0) {
        if (count > 0) range_fn(0, count);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    std::mutex ex_mutex;
    std::exception_ptr first_error;
    const std::size_t chunk = (count + workers - 1) / workers;
    for (int t = 0; t < workers; ++t) {
        const std::size_t lo = static_cast<std::size_t>(t) * chunk;
        const std::size_t hi = std::min(count, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([&, lo, hi] {
            try {
                range_fn(lo, hi);
            } catch (...) {
                std::lock_guard<std::mutex> lock(ex_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

double SplitMix64::normal() {
    // never returns u1 == 0, so the log is safe
    const double u1 = (static_cast<double>(next() >> 11) + 1.0) * 0x1.0p-53;
    const double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

SplitMix64 substream(std::uint64_t seed, std::uint64_t index) {
    SplitMix64 mixer(seed ^ (0x6a09e667f3bcc909ULL + index * 0x9e3779b97f4a7c15ULL));
    // burn a few outputs so adjacent indices decorrelate
    mixer.next();
    mixer.next();
    return mixer;
}

} // namespace hkit
