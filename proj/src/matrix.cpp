#include "nmfz/matrix.hpp"

#include <cmath>
#include <stdexcept>

namespace nmfz {

namespace {

// Below this many flops/elements a parallel region costs more than it saves.
constexpr std::size_t kParallelThreshold = 32768;

void check_same_shape(const DenseMatrix& a, const DenseMatrix& b, const char* op) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw std::invalid_argument(std::string(op) + ": shape mismatch " + shape_str(a) +
                                    " vs " + shape_str(b));
    }
}

} // namespace

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), values_(rows * cols, 0.0) {
    if (rows == 0 || cols == 0) {
        throw std::invalid_argument("DenseMatrix: dimensions must be positive, got " +
                                    std::to_string(rows) + "x" + std::to_string(cols));
    }
}

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> values)
    : rows_(rows), cols_(cols), values_(std::move(values)) {
    if (rows == 0 || cols == 0) {
        throw std::invalid_argument("DenseMatrix: dimensions must be positive, got " +
                                    std::to_string(rows) + "x" + std::to_string(cols));
    }
    if (values_.size() != rows * cols) {
        throw std::invalid_argument("DenseMatrix: " + std::to_string(values_.size()) +
                                    " values for a " + std::to_string(rows) + "x" +
                                    std::to_string(cols) + " matrix");
    }
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
    DenseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

std::string shape_str(const DenseMatrix& a) {
    return std::to_string(a.rows()) + "x" + std::to_string(a.cols());
}

DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.cols() != b.rows()) {
        throw std::invalid_argument("matmul: dimension mismatch " + shape_str(a) + " * " +
                                    shape_str(b));
    }
    const std::size_t m = a.rows(), k = a.cols(), n = b.cols();
    DenseMatrix out(m, n);
    const double* pa = a.data();
    const double* pb = b.data();
    double* pc = out.data();
    const bool big = m * k * n > kParallelThreshold;
#pragma omp parallel for schedule(static) if (big)
    for (std::size_t i = 0; i < m; ++i) {
        double* crow = pc + i * n;
        for (std::size_t l = 0; l < k; ++l) {
            const double ail = pa[i * k + l];
            const double* brow = pb + l * n;
            for (std::size_t j = 0; j < n; ++j) crow[j] += ail * brow[j];
        }
    }
    return out;
}

DenseMatrix matmul_at_b(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.rows() != b.rows()) {
        throw std::invalid_argument("matmul_at_b: dimension mismatch " + shape_str(a) +
                                    "^T * " + shape_str(b));
    }
    const std::size_t m = a.cols(), k = a.rows(), n = b.cols();
    DenseMatrix out(m, n);
    const double* pa = a.data();
    const double* pb = b.data();
    double* pc = out.data();
    const bool big = m * k * n > kParallelThreshold;
#pragma omp parallel for schedule(static) if (big)
    for (std::size_t i = 0; i < m; ++i) {
        double* crow = pc + i * n;
        for (std::size_t l = 0; l < k; ++l) {
            const double ali = pa[l * m + i];
            const double* brow = pb + l * n;
            for (std::size_t j = 0; j < n; ++j) crow[j] += ali * brow[j];
        }
    }
    return out;
}

DenseMatrix matmul_a_bt(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.cols() != b.cols()) {
        throw std::invalid_argument("matmul_a_bt: dimension mismatch " + shape_str(a) + " * " +
                                    shape_str(b) + "^T");
    }
    const std::size_t m = a.rows(), k = a.cols(), n = b.rows();
    DenseMatrix out(m, n);
    const double* pa = a.data();
    const double* pb = b.data();
    double* pc = out.data();
    const bool big = m * k * n > kParallelThreshold;
#pragma omp parallel for schedule(static) if (big)
    for (std::size_t i = 0; i < m; ++i) {
        const double* arow = pa + i * k;
        for (std::size_t j = 0; j < n; ++j) {
            const double* brow = pb + j * k;
            double acc = 0.0;
            for (std::size_t l = 0; l < k; ++l) acc += arow[l] * brow[l];
            pc[i * n + j] = acc;
        }
    }
    return out;
}

DenseMatrix transpose(const DenseMatrix& a) {
    DenseMatrix out(a.cols(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) out(j, i) = a(i, j);
    return out;
}

DenseMatrix hadamard_mul(const DenseMatrix& a, const DenseMatrix& b) {
    check_same_shape(a, b, "hadamard_mul");
    DenseMatrix out(a.rows(), a.cols());
    const double* pa = a.data();
    const double* pb = b.data();
    double* pc = out.data();
    const std::size_t n = a.size();
#pragma omp parallel for schedule(static) if (n > kParallelThreshold)
    for (std::size_t i = 0; i < n; ++i) pc[i] = pa[i] * pb[i];
    return out;
}

DenseMatrix hadamard_div_guarded(const DenseMatrix& num, const DenseMatrix& den, double eps) {
    check_same_shape(num, den, "hadamard_div_guarded");
    if (!(eps > 0.0)) {
        throw std::invalid_argument("hadamard_div_guarded: eps must be positive");
    }
    const double* pd = den.data();
    for (std::size_t i = 0; i < den.size(); ++i) {
        if (pd[i] < 0.0) {
            throw std::invalid_argument(
                "hadamard_div_guarded: negative denominator entry (broken nonnegativity "
                "invariant upstream)");
        }
    }
    DenseMatrix out(num.rows(), num.cols());
    const double* pn = num.data();
    double* pc = out.data();
    const std::size_t n = num.size();
#pragma omp parallel for schedule(static) if (n > kParallelThreshold)
    for (std::size_t i = 0; i < n; ++i) pc[i] = pn[i] / (pd[i] + eps);
    return out;
}

DenseMatrix scale(const DenseMatrix& a, double c) {
    DenseMatrix out(a.rows(), a.cols());
    const double* pa = a.data();
    double* pc = out.data();
    const std::size_t n = a.size();
#pragma omp parallel for schedule(static) if (n > kParallelThreshold)
    for (std::size_t i = 0; i < n; ++i) pc[i] = c * pa[i];
    return out;
}

DenseMatrix linear_comb(double ca, const DenseMatrix& a, double cb, const DenseMatrix& b) {
    check_same_shape(a, b, "linear_comb");
    DenseMatrix out(a.rows(), a.cols());
    const double* pa = a.data();
    const double* pb = b.data();
    double* pc = out.data();
    const std::size_t n = a.size();
#pragma omp parallel for schedule(static) if (n > kParallelThreshold)
    for (std::size_t i = 0; i < n; ++i) pc[i] = ca * pa[i] + cb * pb[i];
    return out;
}

double trace(const DenseMatrix& a) {
    if (a.rows() != a.cols()) {
        throw std::invalid_argument("trace: matrix is not square, " + shape_str(a));
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i) acc += a(i, i);
    return acc;
}

double frobenius_sq(const DenseMatrix& a) {
    // Row partials summed in row order: result does not depend on thread count.
    std::vector<double> partial(a.rows(), 0.0);
    const double* pa = a.data();
    const std::size_t rows = a.rows(), cols = a.cols();
#pragma omp parallel for schedule(static) if (rows* cols > kParallelThreshold)
    for (std::size_t i = 0; i < rows; ++i) {
        const double* row = pa + i * cols;
        double acc = 0.0;
        for (std::size_t j = 0; j < cols; ++j) acc += row[j] * row[j];
        partial[i] = acc;
    }
    double total = 0.0;
    for (double p : partial) total += p;
    return total;
}

double min_entry(const DenseMatrix& a) {
    double m = a.data()[0];
    for (std::size_t i = 1; i < a.size(); ++i) m = std::min(m, a.data()[i]);
    return m;
}

double max_entry(const DenseMatrix& a) {
    double m = a.data()[0];
    for (std::size_t i = 1; i < a.size(); ++i) m = std::max(m, a.data()[i]);
    return m;
}

bool all_nonnegative(const DenseMatrix& a) {
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (!(a.data()[i] >= 0.0)) return false; // also catches NaN
    }
    return true;
}

bool all_finite(const DenseMatrix& a) {
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (!std::isfinite(a.data()[i])) return false;
    }
    return true;
}

DenseMatrix select_columns(const DenseMatrix& a, const std::vector<std::size_t>& cols) {
    if (cols.empty()) {
        throw std::invalid_argument("select_columns: empty column list");
    }
    DenseMatrix out(a.rows(), cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j) {
        if (cols[j] >= a.cols()) {
            throw std::invalid_argument("select_columns: column index " +
                                        std::to_string(cols[j]) + " out of range for " +
                                        shape_str(a));
        }
        for (std::size_t i = 0; i < a.rows(); ++i) out(i, j) = a(i, cols[j]);
    }
    return out;
}

} // namespace nmfz
