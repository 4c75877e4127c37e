#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace nmfz {

/// Dense row-major matrix of doubles. The common currency of every kernel
/// in this toolkit; dimensions are always positive.
class DenseMatrix {
public:
    DenseMatrix() = default;
    DenseMatrix(std::size_t rows, std::size_t cols);
    DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> values);

    static DenseMatrix identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t size() const { return values_.size(); }
    bool empty() const { return values_.empty(); }

    double& operator()(std::size_t r, std::size_t c) { return values_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const { return values_[r * cols_ + c]; }

    double* data() { return values_.data(); }
    const double* data() const { return values_.data(); }
    const std::vector<double>& values() const { return values_; }

    bool operator==(const DenseMatrix& other) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> values_;
};

std::string shape_str(const DenseMatrix& a);

// Kernels. All are pure functions; the OpenMP-parallel ones partition work
// by output row with a fixed per-element accumulation order, so results are
// bitwise identical for any thread count.

DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b);
/// aT * b without materializing the transpose.
DenseMatrix matmul_at_b(const DenseMatrix& a, const DenseMatrix& b);
/// a * bT without materializing the transpose.
DenseMatrix matmul_a_bt(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix transpose(const DenseMatrix& a);

DenseMatrix hadamard_mul(const DenseMatrix& a, const DenseMatrix& b);
/// Elementwise num / (den + eps). den must be nonnegative and eps > 0; a
/// negative den entry signals a broken nonnegativity invariant upstream and
/// is rejected.
DenseMatrix hadamard_div_guarded(const DenseMatrix& num, const DenseMatrix& den, double eps);

DenseMatrix scale(const DenseMatrix& a, double c);
/// ca * a + cb * b, elementwise.
DenseMatrix linear_comb(double ca, const DenseMatrix& a, double cb, const DenseMatrix& b);

double trace(const DenseMatrix& a);
double frobenius_sq(const DenseMatrix& a);

double min_entry(const DenseMatrix& a);
double max_entry(const DenseMatrix& a);
bool all_nonnegative(const DenseMatrix& a);
bool all_finite(const DenseMatrix& a);

DenseMatrix select_columns(const DenseMatrix& a, const std::vector<std::size_t>& cols);

} // namespace nmfz
