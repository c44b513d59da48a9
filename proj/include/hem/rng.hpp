#pragma once
// Counter-based pseudorandom generator.
//
// Every draw is a pure function of (seed, stream, counter), so results are
// byte-identical across platforms, thread counts, and standard-library
// versions. std::mt19937 would give the same bits everywhere, but the
// std distributions are not pinned by the standard, so we keep the whole
// pipeline (bit mixer, uniform, gaussian) in-house.

#include <cmath>
#include <cstdint>
#include <functional>
#include <thread>
#include <vector>

namespace hem {

// SplitMix64-style finalizer: bijective mixer with good avalanche behavior.
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::uint64_t stream = 0)
        : base_(mix64(seed ^ 0x6a09e667f3bcc909ULL) ^ mix64(stream * 0x100000001b3ULL + 0xcbf29ce484222325ULL)) {}

    // Jump straight to an absolute draw index; used for deterministic batching.
    void seek(std::uint64_t counter) { ctr_ = counter; have_spare_ = false; }

    std::uint64_t next_u64() { return mix64(base_ ^ mix64(ctr_++)); }

    // uniform in (0,1): top 53 bits, offset so 0 is never returned
    double next_uniform() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    // standard normal via Box-Muller (both branches cached)
    double next_gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = next_uniform();
        double u2 = next_uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        double c = std::cos(6.283185307179586476925286766559 * u2);
        double s = std::sin(6.283185307179586476925286766559 * u2);
        spare_ = r * s;
        have_spare_ = true;
        return r * c;
    }

private:
    std::uint64_t base_;
    std::uint64_t ctr_ = 0;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

// Number of worker threads: HEM_THREADS if set, else hardware concurrency.
std::size_t worker_count();

// Deterministic parallel map-reduce over [0, n) in fixed batches of 256.
// body(batch_first, batch_last, slot) must write its partial result into
// slot; partials are combined in batch order regardless of thread count,
// so floating-point sums are reproducible.
void parallel_batches(std::uint64_t n,
                      const std::function<void(std::uint64_t, std::uint64_t, std::size_t)>& body,
                      std::size_t batch_count);

inline constexpr std::uint64_t kBatchSize = 256;

// Deterministic parallel execution of `nbatch` contiguous ranges evenly
// partitioning [0, n) (sizes differ by at most one draw). Unlike
// parallel_batches, the number of ranges is fixed and the range length grows
// with n; used for Monte Carlo batch-mean error estimation, where the
// statistical batch count must stay constant as samples scale.
void parallel_ranges(std::uint64_t n, std::size_t nbatch,
                     const std::function<void(std::uint64_t, std::uint64_t, std::size_t)>& body);

// Convenience: accumulate per-batch doubles deterministically.
// fn(first, last) returns the partial sum for draw indices [first, last).
double parallel_sum(std::uint64_t n, const std::function<double(std::uint64_t, std::uint64_t)>& fn);

// Same but for pairs (e.g. sum and sum of squares).
std::pair<double, double> parallel_sum2(
    std::uint64_t n,
    const std::function<std::pair<double, double>(std::uint64_t, std::uint64_t)>& fn);

}  // namespace hem
