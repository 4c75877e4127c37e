// Kernel benchmark: OpenMP-parallel kernels against the serial reference on
// recognition-protocol shapes (p=644, n=200 training columns), plus one full
// factorization run at 1 thread vs all threads.

#include <chrono>
#include <cstdio>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "nmfz/factorize.hpp"
#include "nmfz/matrix.hpp"
#include "nmfz/ref_kernels.hpp"
#include "nmfz/rng.hpp"

namespace {

using nmfz::DenseMatrix;

DenseMatrix random_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed) {
    nmfz::Rng rng(seed);
    DenseMatrix m(rows, cols);
    for (std::size_t i = 0; i < m.size(); ++i) m.data()[i] = rng.uniform();
    return m;
}

template <typename F>
double time_best_of(int reps, F&& fn) {
    double best = 1e300;
    for (int r = 0; r < reps; ++r) {
        const auto t0 = std::chrono::steady_clock::now();
        fn();
        const auto t1 = std::chrono::steady_clock::now();
        best = std::min(best, std::chrono::duration<double, std::milli>(t1 - t0).count());
    }
    return best;
}

volatile double sink = 0.0;

void report(const char* name, double serial_ms, double parallel_ms, bool identical) {
    std::printf("%-28s serial %8.2f ms   parallel %8.2f ms   speedup %5.2fx   %s\n", name,
                serial_ms, parallel_ms, serial_ms / parallel_ms,
                identical ? "bitwise-equal" : "tolerance-equal");
}

} // namespace

int main() {
#ifdef _OPENMP
    std::printf("OpenMP threads: %d\n", omp_get_max_threads());
#else
    std::printf("OpenMP not enabled; comparing identical serial paths\n");
#endif

    const DenseMatrix x = random_matrix(644, 200, 1);
    const DenseMatrix h = random_matrix(16, 200, 2);
    const DenseMatrix w = random_matrix(644, 16, 3);

    {
        DenseMatrix a, b;
        const double ts = time_best_of(5, [&] { a = nmfz::ref::matmul_a_bt(x, h); });
        const double tp = time_best_of(5, [&] { b = nmfz::matmul_a_bt(x, h); });
        report("X*H^T (644x200)(16x200)^T", ts, tp, a == b);
    }
    {
        DenseMatrix a, b;
        const double ts = time_best_of(3, [&] { a = nmfz::ref::matmul_a_bt(x, x); });
        const double tp = time_best_of(3, [&] { b = nmfz::matmul_a_bt(x, x); });
        report("X*X^T (644x644 Gram)", ts, tp, a == b);
    }
    {
        DenseMatrix a, b;
        const double ts = time_best_of(5, [&] { a = nmfz::ref::matmul_at_b(x, x); });
        const double tp = time_best_of(5, [&] { b = nmfz::matmul_at_b(x, x); });
        report("X^T*X (200x200 Gram)", ts, tp, a == b);
    }
    {
        const DenseMatrix xxt = nmfz::matmul_a_bt(x, x);
        DenseMatrix a, b;
        const double ts = time_best_of(5, [&] { a = nmfz::ref::matmul(xxt, w); });
        const double tp = time_best_of(5, [&] { b = nmfz::matmul(xxt, w); });
        report("XX^T*W (644x644)(644x16)", ts, tp, a == b);
    }
    {
        double a = 0, b = 0;
        const double ts = time_best_of(10, [&] { a = nmfz::ref::frobenius_sq(x); });
        const double tp = time_best_of(10, [&] { b = nmfz::frobenius_sq(x); });
        sink = a + b;
        report("frobenius_sq (644x200)", ts, tp, a == b);
    }

    nmfz::FactorizationConfig config;
    config.kind = nmfz::PenaltyKind::Zellner;
    config.rank_q = 16;
    config.params.alpha = 0.45;
    config.params.beta = 0.45;
    config.g_override = 75.0;
    config.max_iters = 100;
    config.rel_tol = 0.0;
    config.seed = 7;

#ifdef _OPENMP
    const int max_threads = omp_get_max_threads();
    omp_set_num_threads(1);
    nmfz::FactorizationResult r1;
    const double t1 = time_best_of(1, [&] { r1 = nmfz::run(x, config); });
    omp_set_num_threads(max_threads);
    nmfz::FactorizationResult rn;
    const double tn = time_best_of(1, [&] { rn = nmfz::run(x, config); });
    report("znmf run q=16, 100 iters", t1, tn, r1.w == rn.w && r1.h == rn.h);
#else
    nmfz::FactorizationResult r;
    const double t = time_best_of(1, [&] { r = nmfz::run(x, config); });
    std::printf("znmf run q=16, 100 iters: %.2f ms\n", t);
#endif
    return 0;
}
