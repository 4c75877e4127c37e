#include "nmfz/ref_kernels.hpp"

#include <stdexcept>

namespace nmfz::ref {

DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.cols() != b.rows()) {
        throw std::invalid_argument("ref::matmul: dimension mismatch " + shape_str(a) + " * " +
                                    shape_str(b));
    }
    DenseMatrix out(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < b.cols(); ++j) {
            double acc = 0.0;
            for (std::size_t l = 0; l < a.cols(); ++l) acc += a(i, l) * b(l, j);
            out(i, j) = acc;
        }
    }
    return out;
}

DenseMatrix matmul_at_b(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.rows() != b.rows()) {
        throw std::invalid_argument("ref::matmul_at_b: dimension mismatch " + shape_str(a) +
                                    "^T * " + shape_str(b));
    }
    DenseMatrix out(a.cols(), b.cols());
    for (std::size_t i = 0; i < a.cols(); ++i) {
        for (std::size_t j = 0; j < b.cols(); ++j) {
            double acc = 0.0;
            for (std::size_t l = 0; l < a.rows(); ++l) acc += a(l, i) * b(l, j);
            out(i, j) = acc;
        }
    }
    return out;
}

DenseMatrix matmul_a_bt(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.cols() != b.cols()) {
        throw std::invalid_argument("ref::matmul_a_bt: dimension mismatch " + shape_str(a) +
                                    " * " + shape_str(b) + "^T");
    }
    DenseMatrix out(a.rows(), b.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < b.rows(); ++j) {
            double acc = 0.0;
            for (std::size_t l = 0; l < a.cols(); ++l) acc += a(i, l) * b(j, l);
            out(i, j) = acc;
        }
    }
    return out;
}

DenseMatrix hadamard_mul(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw std::invalid_argument("ref::hadamard_mul: shape mismatch " + shape_str(a) +
                                    " vs " + shape_str(b));
    }
    DenseMatrix out(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.size(); ++i) out.data()[i] = a.data()[i] * b.data()[i];
    return out;
}

DenseMatrix hadamard_div_guarded(const DenseMatrix& num, const DenseMatrix& den, double eps) {
    if (num.rows() != den.rows() || num.cols() != den.cols()) {
        throw std::invalid_argument("ref::hadamard_div_guarded: shape mismatch " +
                                    shape_str(num) + " vs " + shape_str(den));
    }
    if (!(eps > 0.0)) {
        throw std::invalid_argument("ref::hadamard_div_guarded: eps must be positive");
    }
    DenseMatrix out(num.rows(), num.cols());
    for (std::size_t i = 0; i < num.size(); ++i) {
        if (den.data()[i] < 0.0) {
            throw std::invalid_argument("ref::hadamard_div_guarded: negative denominator entry");
        }
        out.data()[i] = num.data()[i] / (den.data()[i] + eps);
    }
    return out;
}

double frobenius_sq(const DenseMatrix& a) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += a.data()[i] * a.data()[i];
    return acc;
}

} // namespace nmfz::ref
