#include "nmfz/factorize.hpp"

#include <cmath>
#include <stdexcept>
#include <tuple>

#include "nmfz/rng.hpp"

namespace nmfz {

namespace {

constexpr std::size_t kStopWindow = 10;

void check_nonnegative(const DenseMatrix& m, const char* what) {
    if (!all_nonnegative(m)) {
        throw std::invalid_argument(std::string(what) + " has a negative (or NaN) entry");
    }
}

void check_update_inputs(const DenseMatrix& x, const DenseMatrix& w, const DenseMatrix& h,
                         const char* op) {
    if (w.rows() != x.rows() || h.cols() != x.cols() || w.cols() != h.rows()) {
        throw std::invalid_argument(std::string(op) + ": incompatible shapes X=" + shape_str(x) +
                                    " W=" + shape_str(w) + " H=" + shape_str(h));
    }
    check_nonnegative(x, "X");
    check_nonnegative(w, "W");
    check_nonnegative(h, "H");
}

void check_weight(double v, const char* name) {
    if (!(v >= 0.0 && v <= 1.0)) {
        throw std::invalid_argument(std::string(name) + " must be in [0, 1]");
    }
}

DenseMatrix fill_uniform(std::size_t rows, std::size_t cols, Rng& rng) {
    DenseMatrix m(rows, cols);
    for (std::size_t i = 0; i < m.size(); ++i) m.data()[i] = rng.uniform(1e-4, 1.0);
    return m;
}

} // namespace

double default_g(std::size_t n, std::size_t p) {
    if (n == 0 || p == 0) throw std::invalid_argument("default_g: n and p must be positive");
    const double np = static_cast<double>(n);
    const double pp = static_cast<double>(p) * static_cast<double>(p);
    return std::max(np, pp);
}

std::pair<DenseMatrix, DenseMatrix> init_factors(std::size_t p, std::size_t n, std::size_t q,
                                                 std::uint64_t seed) {
    if (q == 0 || q > std::min(p, n)) {
        throw std::invalid_argument("init_factors: rank " + std::to_string(q) +
                                    " invalid for a " + std::to_string(p) + "x" +
                                    std::to_string(n) + " matrix");
    }
    Rng rng(seed);
    DenseMatrix w = fill_uniform(p, q, rng);
    DenseMatrix h = fill_uniform(q, n, rng);
    return {std::move(w), std::move(h)};
}

std::pair<DenseMatrix, DenseMatrix> update_plain(const DenseMatrix& x, const DenseMatrix& w,
                                                 const DenseMatrix& h, double guard_eps) {
    check_update_inputs(x, w, h, "update_plain");

    const DenseMatrix xht = matmul_a_bt(x, h);
    const DenseMatrix whht = matmul(w, matmul_a_bt(h, h));
    DenseMatrix w1 = hadamard_mul(w, hadamard_div_guarded(xht, whht, guard_eps));

    const DenseMatrix wtx = matmul_at_b(w1, x);
    const DenseMatrix wtwh = matmul(matmul_at_b(w1, w1), h);
    DenseMatrix h1 = hadamard_mul(h, hadamard_div_guarded(wtx, wtwh, guard_eps));

    return {std::move(w1), std::move(h1)};
}

std::pair<DenseMatrix, DenseMatrix> update_cnmf(const DenseMatrix& x, const DenseMatrix& w,
                                                const DenseMatrix& h, double alpha, double beta,
                                                double guard_eps) {
    check_update_inputs(x, w, h, "update_cnmf");
    check_weight(alpha, "alpha");
    check_weight(beta, "beta");

    // dJ1/dW = 2W and dJ2/dH = 2H enter the denominators explicitly.
    const DenseMatrix xht = matmul_a_bt(x, h);
    const DenseMatrix den_w =
        linear_comb(1.0, matmul(w, matmul_a_bt(h, h)), 2.0 * alpha, w);
    DenseMatrix w1 = hadamard_mul(w, hadamard_div_guarded(xht, den_w, guard_eps));

    const DenseMatrix wtx = matmul_at_b(w1, x);
    const DenseMatrix den_h =
        linear_comb(1.0, matmul(matmul_at_b(w1, w1), h), 2.0 * beta, h);
    DenseMatrix h1 = hadamard_mul(h, hadamard_div_guarded(wtx, den_h, guard_eps));

    return {std::move(w1), std::move(h1)};
}

std::pair<DenseMatrix, DenseMatrix> update_znmf(const DenseMatrix& x, const DenseMatrix& w,
                                                const DenseMatrix& h, double alpha, double beta,
                                                double g, double guard_eps) {
    return update_znmf_cached(x, matmul_a_bt(x, x), matmul_at_b(x, x), w, h, alpha, beta, g,
                              guard_eps);
}

std::pair<DenseMatrix, DenseMatrix> update_znmf_cached(const DenseMatrix& x,
                                                       const DenseMatrix& xxt,
                                                       const DenseMatrix& xtx,
                                                       const DenseMatrix& w, const DenseMatrix& h,
                                                       double alpha, double beta, double g,
                                                       double guard_eps) {
    check_update_inputs(x, w, h, "update_znmf");
    check_weight(alpha, "alpha");
    check_weight(beta, "beta");
    if (!(g > 0.0)) throw std::invalid_argument("update_znmf: g must be positive");
    if (xxt.rows() != x.rows() || xxt.cols() != x.rows() || xtx.rows() != x.cols() ||
        xtx.cols() != x.cols()) {
        throw std::invalid_argument("update_znmf: cached Gram matrices do not match X=" +
                                    shape_str(x));
    }

    const DenseMatrix xht = matmul_a_bt(x, h);
    const DenseMatrix den_w =
        linear_comb(1.0, matmul(w, matmul_a_bt(h, h)), alpha / g, matmul(xxt, w));
    DenseMatrix w1 = hadamard_mul(w, hadamard_div_guarded(xht, den_w, guard_eps));

    // H' = g H .* (W'^T X) ./ (g W'^T W' H + beta H X^T X); the g factors
    // would cancel algebraically but are kept.
    const DenseMatrix wtx = matmul_at_b(w1, x);
    const DenseMatrix den_h =
        linear_comb(g, matmul(matmul_at_b(w1, w1), h), beta, matmul(h, xtx));
    DenseMatrix h1 = scale(hadamard_mul(h, hadamard_div_guarded(wtx, den_h, guard_eps)), g);

    return {std::move(w1), std::move(h1)};
}

FactorizationResult run(const DenseMatrix& x, const FactorizationConfig& config) {
    if (x.empty()) throw std::invalid_argument("run: empty matrix");
    check_nonnegative(x, "X");
    const std::size_t p = x.rows();
    const std::size_t n = x.cols();
    if (config.rank_q == 0 || config.rank_q > std::min(p, n)) {
        throw std::invalid_argument("run: rank " + std::to_string(config.rank_q) +
                                    " exceeds min(p, n) for X=" + shape_str(x));
    }
    if (config.max_iters == 0) throw std::invalid_argument("run: max_iters must be >= 1");
    if (!(config.rel_tol >= 0.0)) throw std::invalid_argument("run: rel_tol must be >= 0");
    if (!(config.guard_eps > 0.0)) throw std::invalid_argument("run: guard_eps must be positive");

    PenaltyParams params = config.params;
    if (config.kind == PenaltyKind::Zellner) {
        params.g = config.g_override ? *config.g_override : default_g(n, p);
    }
    validate_penalty_params(config.kind, params);

    FactorizationResult result;
    result.g = config.kind == PenaltyKind::Zellner ? params.g : 0.0;
    auto [w, h] = init_factors(p, n, config.rank_q, config.seed);

    // The data Gram matrices are constant across iterations.
    DenseMatrix xxt, xtx;
    if (config.kind == PenaltyKind::Zellner) {
        xxt = matmul_a_bt(x, x);
        xtx = matmul_at_b(x, x);
    }

    result.objective_trace.reserve(config.max_iters);
    for (std::size_t iter = 0; iter < config.max_iters; ++iter) {
        switch (config.kind) {
            case PenaltyKind::None:
                std::tie(w, h) = update_plain(x, w, h, config.guard_eps);
                break;
            case PenaltyKind::Frobenius:
                std::tie(w, h) = update_cnmf(x, w, h, params.alpha, params.beta,
                                             config.guard_eps);
                break;
            case PenaltyKind::Zellner:
                std::tie(w, h) = update_znmf_cached(x, xxt, xtx, w, h, params.alpha, params.beta,
                                                    params.g, config.guard_eps);
                break;
        }
        const double objective = total_objective(x, w, h, config.kind, params);
        result.objective_trace.push_back(objective);
        result.iterations = iter + 1;
        if (result.objective_trace.size() > kStopWindow) {
            const double prev = result.objective_trace[result.objective_trace.size() - 1 -
                                                       kStopWindow];
            const double change = std::fabs(objective - prev) / std::max(prev, 1e-30);
            if (change < config.rel_tol) {
                result.converged = true;
                break;
            }
        }
    }

    result.w = std::move(w);
    result.h = std::move(h);
    return result;
}

} // namespace nmfz
