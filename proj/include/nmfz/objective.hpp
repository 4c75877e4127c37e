#pragma once

#include "nmfz/matrix.hpp"

namespace nmfz {

enum class PenaltyKind { None, Frobenius, Zellner };

const char* penalty_kind_name(PenaltyKind kind);
PenaltyKind penalty_kind_from_name(const std::string& name);

struct PenaltyParams {
    double alpha = 0.0; // weight on J1(W), in [0, 1]
    double beta = 0.0;  // weight on J2(H), in [0, 1]
    double g = 1.0;     // Zellner scale, > 0 (ignored by the other kinds)
};

void validate_penalty_params(PenaltyKind kind, const PenaltyParams& params);

/// ||X - WH||_F^2.
double frobenius_cost(const DenseMatrix& x, const DenseMatrix& w, const DenseMatrix& h);

/// Generalized KL divergence D(X || WH), with the convention 0*log(0) = 0.
/// A positive X entry against a zero reconstruction makes the divergence
/// undefined and is reported as an error rather than returned as infinity.
double kl_divergence(const DenseMatrix& x, const DenseMatrix& w, const DenseMatrix& h);

/// (1/g) * trace(W^T X X^T W), computed as frobenius_sq(X^T W) / g.
double zellner_penalty_w(const DenseMatrix& x, const DenseMatrix& w, double g);
/// (1/g) * trace(H X^T X H^T), computed as frobenius_sq(X H^T) / g.
double zellner_penalty_h(const DenseMatrix& x, const DenseMatrix& h, double g);

/// (2/g) * X X^T W, the gradient of zellner_penalty_w.
DenseMatrix grad_zellner_w(const DenseMatrix& x, const DenseMatrix& w, double g);
/// (2/g) * H X^T X, the gradient of zellner_penalty_h.
DenseMatrix grad_zellner_h(const DenseMatrix& x, const DenseMatrix& h, double g);

/// frobenius_cost + alpha*J1(W) + beta*J2(H), with J1/J2 selected by kind:
/// None -> both zero; Frobenius -> ||W||_F^2 and ||H||_F^2; Zellner -> the
/// g-scaled trace penalties above.
double total_objective(const DenseMatrix& x, const DenseMatrix& w, const DenseMatrix& h,
                       PenaltyKind kind, const PenaltyParams& params);

} // namespace nmfz
