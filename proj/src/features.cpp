#include "nmfz/features.hpp"

#include <limits>
#include <stdexcept>

#include "nmfz/rng.hpp"

namespace nmfz {

DenseMatrix extract_features(const DenseMatrix& w, const DenseMatrix& x_new, std::size_t iters,
                             std::uint64_t seed, double guard_eps) {
    if (w.rows() != x_new.rows()) {
        throw std::invalid_argument("extract_features: basis W=" + shape_str(w) +
                                    " does not match samples X=" + shape_str(x_new));
    }
    if (iters == 0) throw std::invalid_argument("extract_features: iters must be >= 1");
    if (!all_nonnegative(w)) throw std::invalid_argument("extract_features: W has a negative entry");
    if (!all_nonnegative(x_new)) {
        throw std::invalid_argument("extract_features: X has a negative entry");
    }
    for (std::size_t j = 0; j < w.cols(); ++j) {
        double colmax = 0.0;
        for (std::size_t i = 0; i < w.rows(); ++i) colmax = std::max(colmax, w(i, j));
        if (colmax == 0.0) {
            throw std::invalid_argument("extract_features: basis column " + std::to_string(j) +
                                        " is all zero");
        }
    }

    Rng rng(seed);
    DenseMatrix h(w.cols(), x_new.cols());
    for (std::size_t i = 0; i < h.size(); ++i) h.data()[i] = rng.uniform(1e-4, 1.0);

    // W is fixed, so W^T X and W^T W are loop invariants.
    const DenseMatrix wtx = matmul_at_b(w, x_new);
    const DenseMatrix wtw = matmul_at_b(w, w);
    for (std::size_t iter = 0; iter < iters; ++iter) {
        const DenseMatrix den = matmul(wtw, h);
        h = hadamard_mul(h, hadamard_div_guarded(wtx, den, guard_eps));
    }
    return h;
}

std::vector<int> nearest_neighbor(const FeatureSet& train, const DenseMatrix& test_features) {
    if (train.features.empty()) throw std::invalid_argument("nearest_neighbor: empty training set");
    if (train.labels.size() != train.features.cols()) {
        throw std::invalid_argument("nearest_neighbor: " + std::to_string(train.labels.size()) +
                                    " labels for " + std::to_string(train.features.cols()) +
                                    " training columns");
    }
    if (train.features.rows() != test_features.rows()) {
        throw std::invalid_argument("nearest_neighbor: train=" + shape_str(train.features) +
                                    " and test=" + shape_str(test_features) +
                                    " feature dimensions differ");
    }

    const std::size_t q = train.features.rows();
    const std::size_t m_train = train.features.cols();
    const std::size_t m_test = test_features.cols();
    std::vector<int> predicted(m_test);

#pragma omp parallel for schedule(static) if (q* m_train* m_test > 32768)
    for (std::size_t j = 0; j < m_test; ++j) {
        double best = std::numeric_limits<double>::infinity();
        std::size_t best_i = 0;
        for (std::size_t i = 0; i < m_train; ++i) {
            double d2 = 0.0;
            for (std::size_t k = 0; k < q; ++k) {
                const double d = train.features(k, i) - test_features(k, j);
                d2 += d * d;
            }
            if (d2 < best) { // strict: ties keep the lowest index
                best = d2;
                best_i = i;
            }
        }
        predicted[j] = train.labels[best_i];
    }
    return predicted;
}

double recognition_rate(const std::vector<int>& predicted, const std::vector<int>& truth) {
    if (predicted.empty() || predicted.size() != truth.size()) {
        throw std::invalid_argument("recognition_rate: label lists must be nonempty and of equal "
                                    "length");
    }
    std::size_t hits = 0;
    for (std::size_t i = 0; i < predicted.size(); ++i) {
        if (predicted[i] == truth[i]) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(predicted.size());
}

} // namespace nmfz
