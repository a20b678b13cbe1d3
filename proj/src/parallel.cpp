#include "errexp/parallel.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace errexp {

namespace {
bool g_parallel = true;
int g_workers = 0;
}  // namespace

void set_parallel_enabled(bool on) { g_parallel = on; }
bool parallel_enabled() { return g_parallel; }
void set_worker_count(int n) { g_workers = n < 0 ? 0 : n; }
int worker_count() { return g_workers; }

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& f) {
#ifdef _OPENMP
    if (g_parallel && n > 1) {
        const long long nn = static_cast<long long>(n);
        if (g_workers > 0) {
#pragma omp parallel for schedule(static) num_threads(g_workers)
            for (long long i = 0; i < nn; ++i) f(static_cast<std::size_t>(i));
        } else {
#pragma omp parallel for schedule(static)
            for (long long i = 0; i < nn; ++i) f(static_cast<std::size_t>(i));
        }
        return;
    }
#endif
    for (std::size_t i = 0; i < n; ++i) f(i);
}

double blocked_sum(std::size_t n, const std::function<double(std::size_t)>& term) {
    const std::size_t nblocks = (n + kSumBlock - 1) / kSumBlock;
    std::vector<double> partial(nblocks, 0.0);
    parallel_for(nblocks, [&](std::size_t b) {
        const std::size_t lo = b * kSumBlock;
        const std::size_t hi = lo + kSumBlock < n ? lo + kSumBlock : n;
        double s = 0.0;
        for (std::size_t i = lo; i < hi; ++i) s += term(i);
        partial[b] = s;
    });
    double total = 0.0;
    for (double p : partial) total += p;
    return total;
}

SumWithSquares blocked_sum_sq(std::size_t n, const std::function<double(std::size_t)>& term) {
    const std::size_t nblocks = (n + kSumBlock - 1) / kSumBlock;
    std::vector<double> psum(nblocks, 0.0), psq(nblocks, 0.0);
    parallel_for(nblocks, [&](std::size_t b) {
        const std::size_t lo = b * kSumBlock;
        const std::size_t hi = lo + kSumBlock < n ? lo + kSumBlock : n;
        double s = 0.0, q = 0.0;
        for (std::size_t i = lo; i < hi; ++i) {
            const double v = term(i);
            s += v;
            q += v * v;
        }
        psum[b] = s;
        psq[b] = q;
    });
    SumWithSquares out;
    out.n = n;
    for (std::size_t b = 0; b < nblocks; ++b) {
        out.sum += psum[b];
        out.sum_sq += psq[b];
    }
    return out;
}

}  // namespace errexp
