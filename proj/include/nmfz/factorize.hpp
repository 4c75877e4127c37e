#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "nmfz/matrix.hpp"
#include "nmfz/objective.hpp"

namespace nmfz {

struct FactorizationConfig {
    PenaltyKind kind = PenaltyKind::None;
    std::size_t rank_q = 2;
    PenaltyParams params;
    /// Zellner scale used by run(); when absent, g = default_g(n, p).
    /// When present it also overrides params.g for the recorded objective.
    std::optional<double> g_override;
    std::size_t max_iters = 500;
    double rel_tol = 1e-5;
    double guard_eps = 1e-12;
    std::uint64_t seed = 0;
};

struct FactorizationResult {
    DenseMatrix w; // p x q
    DenseMatrix h; // q x n
    std::vector<double> objective_trace; // one value per completed iteration
    std::size_t iterations = 0;
    bool converged = false;
    double g = 0.0; // effective Zellner scale (0 for the other kinds)
};

/// The benchmark-prior scale max(n, p^2).
double default_g(std::size_t n, std::size_t p);

/// W (p x q) and H (q x n) with entries independently uniform on [1e-4, 1);
/// deterministic for a fixed seed.
std::pair<DenseMatrix, DenseMatrix> init_factors(std::size_t p, std::size_t n, std::size_t q,
                                                 std::uint64_t seed);

/// One plain multiplicative step: W' = W .* XH^T ./ (WHH^T), then
/// H' = H .* W'^T X ./ (W'^T W' H) using the freshly updated W.
std::pair<DenseMatrix, DenseMatrix> update_plain(const DenseMatrix& x, const DenseMatrix& w,
                                                 const DenseMatrix& h, double guard_eps);

/// One CNMF step; the penalty gradients 2W and 2H enter the denominators
/// with weights alpha and beta.
std::pair<DenseMatrix, DenseMatrix> update_cnmf(const DenseMatrix& x, const DenseMatrix& w,
                                                const DenseMatrix& h, double alpha, double beta,
                                                double guard_eps);

/// One ZNMF step:
///   W' = W .* XH^T ./ (WHH^T + (alpha/g) XX^T W)
///   H' = g H .* W'^T X ./ (g W'^T W' H + beta H X^T X)
/// The g factors in the H update would cancel algebraically; they are kept
/// so the computation matches this form term for term.
std::pair<DenseMatrix, DenseMatrix> update_znmf(const DenseMatrix& x, const DenseMatrix& w,
                                                const DenseMatrix& h, double alpha, double beta,
                                                double g, double guard_eps);

/// ZNMF step with the data Gram matrices precomputed (they are constant
/// across iterations; run() computes them once). xxt = X X^T, xtx = X^T X.
std::pair<DenseMatrix, DenseMatrix> update_znmf_cached(const DenseMatrix& x,
                                                       const DenseMatrix& xxt,
                                                       const DenseMatrix& xtx,
                                                       const DenseMatrix& w, const DenseMatrix& h,
                                                       double alpha, double beta, double g,
                                                       double guard_eps);

/// Initializes W, H from the seed and iterates the kind-matching update until
/// max_iters or until the relative objective change over a 10-iteration
/// window drops below rel_tol. Records total_objective after every iteration.
FactorizationResult run(const DenseMatrix& x, const FactorizationConfig& config);

} // namespace nmfz
