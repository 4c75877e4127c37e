#include <doctest.h>

#include <cmath>

#include "nmfz/matrix.hpp"
#include "nmfz/ref_kernels.hpp"
#include "nmfz/rng.hpp"
#include "test_helpers.hpp"

using nmfz::DenseMatrix;
using testutil::random_matrix;

TEST_CASE("matmul basics") {
    const DenseMatrix a(2, 2, {1, 2, 3, 4});
    CHECK(nmfz::matmul(DenseMatrix::identity(2), a) == a);

    const DenseMatrix zero(2, 2);
    const DenseMatrix b(2, 3, {5, 6, 7, 8, 9, 10});
    const DenseMatrix z = nmfz::matmul(zero, b);
    for (double v : z.values()) CHECK(v == 0.0);

    const DenseMatrix c(2, 2, {5, 6, 7, 8});
    const DenseMatrix ac = nmfz::matmul(a, c);
    CHECK(ac == DenseMatrix(2, 2, {19, 22, 43, 50}));
}

TEST_CASE("matmul rejects mismatched shapes, naming both") {
    const DenseMatrix a(2, 3, std::vector<double>(6, 1.0));
    const DenseMatrix b(2, 2, std::vector<double>(4, 1.0));
    CHECK_THROWS_WITH_AS(nmfz::matmul(a, b), doctest::Contains("2x3"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(nmfz::matmul(a, b), doctest::Contains("2x2"), std::invalid_argument);
}

TEST_CASE("hadamard_mul") {
    const DenseMatrix a(1, 2, {2, 3});
    CHECK(nmfz::hadamard_mul(a, DenseMatrix(1, 2, {1, 1})) == a);
    CHECK(nmfz::hadamard_mul(a, DenseMatrix(1, 2)) == DenseMatrix(1, 2));
    CHECK(nmfz::hadamard_mul(a, DenseMatrix(1, 2, {4, 5})) == DenseMatrix(1, 2, {8, 15}));
    CHECK_THROWS_AS(nmfz::hadamard_mul(a, DenseMatrix(2, 1, {4, 5})), std::invalid_argument);
}

TEST_CASE("hadamard_div_guarded") {
    CHECK_THROWS_AS(nmfz::hadamard_div_guarded(DenseMatrix(1, 1, {4}), DenseMatrix(1, 1, {2}), 0.0),
                    std::invalid_argument);
    CHECK(nmfz::hadamard_div_guarded(DenseMatrix(1, 1, {4}), DenseMatrix(1, 1, {2}), 1e-12)(0, 0) ==
          doctest::Approx(2.0).epsilon(1e-12));
    CHECK(nmfz::hadamard_div_guarded(DenseMatrix(1, 1, {1}), DenseMatrix(1, 1, {0}), 1e-12)(0, 0) ==
          doctest::Approx(1e12));

    const DenseMatrix q =
        nmfz::hadamard_div_guarded(DenseMatrix(1, 2, {6, 8}), DenseMatrix(1, 2, {3, 2}), 1e-12);
    CHECK(q(0, 0) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(q(0, 1) == doctest::Approx(4.0).epsilon(1e-12));

    CHECK_THROWS_AS(
        nmfz::hadamard_div_guarded(DenseMatrix(1, 1, {1}), DenseMatrix(1, 1, {-0.5}), 1e-12),
        std::invalid_argument);
}

TEST_CASE("hadamard_div_guarded never returns NaN or infinity for nonnegative inputs") {
    nmfz::Rng rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t rows = 1 + rng.below(8), cols = 1 + rng.below(8);
        DenseMatrix num = random_matrix(rows, cols, 100 + trial, 0.0, 5.0);
        DenseMatrix den = random_matrix(rows, cols, 200 + trial, 0.0, 5.0);
        // force some exact zeros into the denominator
        for (std::size_t i = 0; i < den.size(); i += 3) den.data()[i] = 0.0;
        const DenseMatrix q = nmfz::hadamard_div_guarded(num, den, 1e-12);
        CHECK(nmfz::all_finite(q));
    }
}

TEST_CASE("trace") {
    CHECK(nmfz::trace(DenseMatrix::identity(3)) == 3.0);
    CHECK(nmfz::trace(DenseMatrix(2, 2)) == 0.0);
    CHECK(nmfz::trace(DenseMatrix(2, 2, {1, 9, 9, 4})) == 5.0);
    CHECK_THROWS_AS(nmfz::trace(DenseMatrix(2, 3, std::vector<double>(6, 0.0))),
                    std::invalid_argument);
}

TEST_CASE("frobenius_sq") {
    CHECK(nmfz::frobenius_sq(DenseMatrix(3, 2)) == 0.0);
    CHECK(nmfz::frobenius_sq(DenseMatrix::identity(2)) == 2.0);
    CHECK(nmfz::frobenius_sq(DenseMatrix(2, 2, {1, 2, 3, 4})) == 30.0);
}

TEST_CASE("trace(A^T A) equals frobenius_sq(A)") {
    nmfz::Rng rng(21);
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t rows = 1 + rng.below(20), cols = 1 + rng.below(20);
        const DenseMatrix a = random_matrix(rows, cols, 300 + trial, -2.0, 2.0);
        const double lhs = nmfz::trace(nmfz::matmul(nmfz::transpose(a), a));
        const double rhs = nmfz::frobenius_sq(a);
        CHECK(std::fabs(lhs - rhs) <= 1e-12 * std::max(1.0, std::fabs(rhs)));
    }
}

TEST_CASE("matmul associativity on random triples") {
    nmfz::Rng rng(31);
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t m = 1 + rng.below(8), k = 1 + rng.below(8);
        const std::size_t l = 1 + rng.below(8), n = 1 + rng.below(8);
        const DenseMatrix a = random_matrix(m, k, 400 + trial, -1.0, 1.0);
        const DenseMatrix b = random_matrix(k, l, 500 + trial, -1.0, 1.0);
        const DenseMatrix c = random_matrix(l, n, 600 + trial, -1.0, 1.0);
        const DenseMatrix left = nmfz::matmul(nmfz::matmul(a, b), c);
        const DenseMatrix right = nmfz::matmul(a, nmfz::matmul(b, c));
        CHECK(testutil::max_rel_diff(left, right) < 1e-10);
    }
}

TEST_CASE("transpose round trip and fused-transpose products") {
    const DenseMatrix a = random_matrix(7, 5, 41, -1.0, 1.0);
    const DenseMatrix b = random_matrix(7, 6, 42, -1.0, 1.0);
    CHECK(nmfz::transpose(nmfz::transpose(a)) == a);
    CHECK(nmfz::matmul_at_b(a, b) == nmfz::matmul(nmfz::transpose(a), b));
    const DenseMatrix c = random_matrix(4, 5, 43, -1.0, 1.0);
    CHECK(nmfz::matmul_a_bt(a, c) == nmfz::matmul(a, nmfz::transpose(c)));
}

TEST_CASE("parallel kernels match the serial reference") {
    // matmul family accumulates in the same order: bitwise. Reductions use a
    // different partial-sum association: tolerance.
    for (int trial = 0; trial < 10; ++trial) {
        const std::size_t m = 3 + trial * 7, k = 2 + trial * 5, n = 1 + trial * 9;
        const DenseMatrix a = random_matrix(m, k, 700 + trial, -1.0, 1.0);
        const DenseMatrix b = random_matrix(k, n, 800 + trial, -1.0, 1.0);
        CHECK(nmfz::matmul(a, b) == nmfz::ref::matmul(a, b));

        const DenseMatrix at = random_matrix(k, m, 900 + trial, -1.0, 1.0);
        const DenseMatrix bt = random_matrix(k, n, 901 + trial, -1.0, 1.0);
        CHECK(nmfz::matmul_at_b(at, bt) == nmfz::ref::matmul_at_b(at, bt));
        const DenseMatrix ct = random_matrix(n, k, 902 + trial, -1.0, 1.0);
        CHECK(nmfz::matmul_a_bt(a, ct) == nmfz::ref::matmul_a_bt(a, ct));

        const DenseMatrix u = random_matrix(m, n, 903 + trial, 0.0, 2.0);
        const DenseMatrix v = random_matrix(m, n, 904 + trial, 0.0, 2.0);
        CHECK(nmfz::hadamard_mul(u, v) == nmfz::ref::hadamard_mul(u, v));
        CHECK(nmfz::hadamard_div_guarded(u, v, 1e-12) ==
              nmfz::ref::hadamard_div_guarded(u, v, 1e-12));

        const double fs = nmfz::frobenius_sq(u);
        const double fs_ref = nmfz::ref::frobenius_sq(u);
        CHECK(std::fabs(fs - fs_ref) <= 1e-13 * std::max(1.0, fs_ref));
    }
}

TEST_CASE("scale and linear_comb") {
    const DenseMatrix a(2, 2, {1, 2, 3, 4});
    const DenseMatrix b(2, 2, {4, 3, 2, 1});
    CHECK(nmfz::scale(a, 2.0) == DenseMatrix(2, 2, {2, 4, 6, 8}));
    CHECK(nmfz::linear_comb(1.0, a, 2.0, b) == DenseMatrix(2, 2, {9, 8, 7, 6}));
    CHECK_THROWS_AS(nmfz::linear_comb(1.0, a, 1.0, DenseMatrix(1, 2, {0, 0})),
                    std::invalid_argument);
}

TEST_CASE("DenseMatrix construction contracts") {
    CHECK_THROWS_AS(DenseMatrix(0, 3), std::invalid_argument);
    CHECK_THROWS_AS(DenseMatrix(2, 2, {1, 2, 3}), std::invalid_argument);
    const DenseMatrix a(2, 3, {1, 2, 3, 4, 5, 6});
    CHECK(a(1, 2) == 6.0);
    CHECK(nmfz::min_entry(a) == 1.0);
    CHECK(nmfz::max_entry(a) == 6.0);
    CHECK(nmfz::all_nonnegative(a));
    CHECK_FALSE(nmfz::all_nonnegative(DenseMatrix(1, 1, {-1})));
}

TEST_CASE("select_columns") {
    const DenseMatrix a(2, 3, {1, 2, 3, 4, 5, 6});
    const DenseMatrix s = nmfz::select_columns(a, {2, 0});
    CHECK(s == DenseMatrix(2, 2, {3, 1, 6, 4}));
    CHECK_THROWS_AS(nmfz::select_columns(a, {3}), std::invalid_argument);
    CHECK_THROWS_AS(nmfz::select_columns(a, {}), std::invalid_argument);
}
