#include "nmfz/objective.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace nmfz {

namespace {

void check_factor_shapes(const DenseMatrix& x, const DenseMatrix& w, const DenseMatrix& h,
                         const char* op) {
    if (w.rows() != x.rows() || h.cols() != x.cols() || w.cols() != h.rows()) {
        throw std::invalid_argument(std::string(op) + ": incompatible shapes X=" + shape_str(x) +
                                    " W=" + shape_str(w) + " H=" + shape_str(h));
    }
}

void check_g(double g, const char* op) {
    if (!(g > 0.0)) {
        throw std::invalid_argument(std::string(op) + ": g must be positive");
    }
}

} // namespace

const char* penalty_kind_name(PenaltyKind kind) {
    switch (kind) {
        case PenaltyKind::None: return "none";
        case PenaltyKind::Frobenius: return "cnmf";
        case PenaltyKind::Zellner: return "znmf";
    }
    return "?";
}

PenaltyKind penalty_kind_from_name(const std::string& name) {
    if (name == "none") return PenaltyKind::None;
    if (name == "cnmf") return PenaltyKind::Frobenius;
    if (name == "znmf") return PenaltyKind::Zellner;
    throw std::invalid_argument("unknown penalty kind '" + name + "' (expected none|cnmf|znmf)");
}

void validate_penalty_params(PenaltyKind kind, const PenaltyParams& params) {
    if (!(params.alpha >= 0.0 && params.alpha <= 1.0)) {
        throw std::invalid_argument("alpha must be in [0, 1]");
    }
    if (!(params.beta >= 0.0 && params.beta <= 1.0)) {
        throw std::invalid_argument("beta must be in [0, 1]");
    }
    if (kind == PenaltyKind::Zellner) check_g(params.g, "validate_penalty_params");
}

double frobenius_cost(const DenseMatrix& x, const DenseMatrix& w, const DenseMatrix& h) {
    check_factor_shapes(x, w, h, "frobenius_cost");
    const DenseMatrix wh = matmul(w, h);
    // Row partials in row order, as in frobenius_sq, keeping the value
    // independent of thread count.
    std::vector<double> partial(x.rows(), 0.0);
    const double* px = x.data();
    const double* pr = wh.data();
    const std::size_t rows = x.rows(), cols = x.cols();
#pragma omp parallel for schedule(static) if (rows* cols > 32768)
    for (std::size_t i = 0; i < rows; ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < cols; ++j) {
            const double d = px[i * cols + j] - pr[i * cols + j];
            acc += d * d;
        }
        partial[i] = acc;
    }
    double total = 0.0;
    for (double p : partial) total += p;
    return total;
}

double kl_divergence(const DenseMatrix& x, const DenseMatrix& w, const DenseMatrix& h) {
    check_factor_shapes(x, w, h, "kl_divergence");
    const DenseMatrix wh = matmul(w, h);
    double total = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double xe = x.data()[i];
        const double re = wh.data()[i];
        if (xe < 0.0 || re < 0.0) {
            throw std::invalid_argument("kl_divergence: negative entry in X or WH");
        }
        if (xe > 0.0) {
            if (re == 0.0) {
                throw std::domain_error(
                    "kl_divergence: undefined, positive X entry against zero reconstruction");
            }
            total += xe * std::log(xe / re) - xe + re;
        } else {
            total += re; // 0*log(0/y) = 0
        }
    }
    return total;
}

double zellner_penalty_w(const DenseMatrix& x, const DenseMatrix& w, double g) {
    check_g(g, "zellner_penalty_w");
    if (w.rows() != x.rows()) {
        throw std::invalid_argument("zellner_penalty_w: X=" + shape_str(x) +
                                    " and W=" + shape_str(w) + " row counts differ");
    }
    return frobenius_sq(matmul_at_b(x, w)) / g;
}

double zellner_penalty_h(const DenseMatrix& x, const DenseMatrix& h, double g) {
    check_g(g, "zellner_penalty_h");
    if (h.cols() != x.cols()) {
        throw std::invalid_argument("zellner_penalty_h: X=" + shape_str(x) +
                                    " and H=" + shape_str(h) + " column counts differ");
    }
    return frobenius_sq(matmul_a_bt(x, h)) / g;
}

DenseMatrix grad_zellner_w(const DenseMatrix& x, const DenseMatrix& w, double g) {
    check_g(g, "grad_zellner_w");
    if (w.rows() != x.rows()) {
        throw std::invalid_argument("grad_zellner_w: X=" + shape_str(x) +
                                    " and W=" + shape_str(w) + " row counts differ");
    }
    return scale(matmul(x, matmul_at_b(x, w)), 2.0 / g);
}

DenseMatrix grad_zellner_h(const DenseMatrix& x, const DenseMatrix& h, double g) {
    check_g(g, "grad_zellner_h");
    if (h.cols() != x.cols()) {
        throw std::invalid_argument("grad_zellner_h: X=" + shape_str(x) +
                                    " and H=" + shape_str(h) + " column counts differ");
    }
    return scale(matmul(matmul_a_bt(h, x), x), 2.0 / g);
}

double total_objective(const DenseMatrix& x, const DenseMatrix& w, const DenseMatrix& h,
                       PenaltyKind kind, const PenaltyParams& params) {
    validate_penalty_params(kind, params);
    double total = frobenius_cost(x, w, h);
    // Zero-weighted penalties are skipped; the penalties are finite and
    // nonnegative, so adding 0*J would not change the value anyway.
    switch (kind) {
        case PenaltyKind::None:
            break;
        case PenaltyKind::Frobenius:
            if (params.alpha != 0.0) total += params.alpha * frobenius_sq(w);
            if (params.beta != 0.0) total += params.beta * frobenius_sq(h);
            break;
        case PenaltyKind::Zellner:
            if (params.alpha != 0.0) total += params.alpha * zellner_penalty_w(x, w, params.g);
            if (params.beta != 0.0) total += params.beta * zellner_penalty_h(x, h, params.g);
            break;
    }
    return total;
}

} // namespace nmfz
