#include "hem/rng.hpp"

#include <cstdlib>
#include <string>

namespace hem {

std::size_t worker_count() {
    if (const char* env = std::getenv("HEM_THREADS")) {
        try {
            long v = std::stol(env);
            if (v >= 1) return static_cast<std::size_t>(v);
        } catch (...) {
        }
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw ? hw : 1;
}

void parallel_batches(std::uint64_t n,
                      const std::function<void(std::uint64_t, std::uint64_t, std::size_t)>& body,
                      std::size_t batch_count) {
    std::size_t workers = std::min<std::size_t>(worker_count(), batch_count ? batch_count : 1);
    if (workers <= 1) {
        for (std::size_t s = 0; s < batch_count; ++s) {
            std::uint64_t first = static_cast<std::uint64_t>(s) * kBatchSize;
            std::uint64_t last = std::min<std::uint64_t>(first + kBatchSize, n);
            body(first, last, s);
        }
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (std::size_t s = w; s < batch_count; s += workers) {
                std::uint64_t first = static_cast<std::uint64_t>(s) * kBatchSize;
                std::uint64_t last = std::min<std::uint64_t>(first + kBatchSize, n);
                body(first, last, s);
            }
        });
    }
    for (auto& t : pool) t.join();
}

void parallel_ranges(std::uint64_t n, std::size_t nbatch,
                     const std::function<void(std::uint64_t, std::uint64_t, std::size_t)>& body) {
    if (nbatch == 0) return;
    const std::uint64_t m = static_cast<std::uint64_t>(nbatch);
    std::size_t workers = std::min<std::size_t>(worker_count(), nbatch);
    auto run_slot = [&](std::size_t s) {
        std::uint64_t first = n * static_cast<std::uint64_t>(s) / m;
        std::uint64_t last = n * static_cast<std::uint64_t>(s + 1) / m;
        body(first, last, s);
    };
    if (workers <= 1) {
        for (std::size_t s = 0; s < nbatch; ++s) run_slot(s);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (std::size_t s = w; s < nbatch; s += workers) run_slot(s);
        });
    }
    for (auto& t : pool) t.join();
}

double parallel_sum(std::uint64_t n,
                    const std::function<double(std::uint64_t, std::uint64_t)>& fn) {
    std::size_t batches = static_cast<std::size_t>((n + kBatchSize - 1) / kBatchSize);
    std::vector<double> partial(batches, 0.0);
    parallel_batches(
        n, [&](std::uint64_t first, std::uint64_t last, std::size_t slot) { partial[slot] = fn(first, last); },
        batches);
    double total = 0.0;
    for (double v : partial) total += v;  // fixed order: batch index
    return total;
}

std::pair<double, double> parallel_sum2(
    std::uint64_t n,
    const std::function<std::pair<double, double>(std::uint64_t, std::uint64_t)>& fn) {
    std::size_t batches = static_cast<std::size_t>((n + kBatchSize - 1) / kBatchSize);
    std::vector<std::pair<double, double>> partial(batches, {0.0, 0.0});
    parallel_batches(
        n, [&](std::uint64_t first, std::uint64_t last, std::size_t slot) { partial[slot] = fn(first, last); },
        batches);
    std::pair<double, double> total{0.0, 0.0};
    for (auto& v : partial) {
        total.first += v.first;
        total.second += v.second;
    }
    return total;
}

}  // namespace hem
