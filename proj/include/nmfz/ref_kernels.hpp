#pragma once

#include "nmfz/matrix.hpp"

namespace nmfz::ref {

// Textbook serial implementations of the parallel kernels, kept as the
// comparison baseline for tests and the kernel benchmark. The matmul family
// accumulates over k in the same ascending order as the parallel kernels,
// so those results match bitwise; the reductions use a plain row-major
// scan and may differ from the parallel partial sums in the last few ulps.

DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix matmul_at_b(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix matmul_a_bt(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix hadamard_mul(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix hadamard_div_guarded(const DenseMatrix& num, const DenseMatrix& den, double eps);
double frobenius_sq(const DenseMatrix& a);

} // namespace nmfz::ref
