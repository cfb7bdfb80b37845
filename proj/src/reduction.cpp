#include "cvp/reduction.hpp"

#include <algorithm>
#include <atomic>
#include <thread>

namespace cvp {

namespace {

std::atomic<unsigned> g_threads{1};

double pairwise_impl(const double* p, std::size_t n) {
    if (n <= 8) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            s += p[i];
        }
        return s;
    }
    const std::size_t h = n / 2;
    return pairwise_impl(p, h) + pairwise_impl(p + h, n - h);
}

}  // namespace

double pairwise_sum(std::span<const double> values) {
    return pairwise_impl(values.data(), values.size());
}

void set_thread_count(unsigned n) { g_threads.store(std::max(1u, n)); }

unsigned thread_count() { return g_threads.load(); }

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
    const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(thread_count(), n));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) {
            body(i);
        }
        return;
    }
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    const std::size_t block = (n + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
        const std::size_t lo = w * block;
        const std::size_t hi = std::min(n, lo + block);
        if (lo >= hi) {
            break;
        }
        pool.emplace_back([lo, hi, &body] {
            for (std::size_t i = lo; i < hi; ++i) {
                body(i);
            }
        });
    }
}

double reduce_rows(std::size_t n, const std::function<double(std::size_t)>& row) {
    std::vector<double> rows(n, 0.0);
    parallel_for(n, [&](std::size_t i) { rows[i] = row(i); });
    return pairwise_sum(rows);
}

}  // namespace cvp
