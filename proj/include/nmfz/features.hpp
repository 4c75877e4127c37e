#pragma once

#include <cstdint>
#include <vector>

#include "nmfz/matrix.hpp"

namespace nmfz {

/// Coefficient columns plus one class label per column.
struct FeatureSet {
    DenseMatrix features; // q x m
    std::vector<int> labels; // size m
};

/// Coefficients for new samples against a fixed basis: H_new starts uniform
/// on [1e-4, 1) from the seed and is refined for `iters` multiplicative
/// steps of H .* W^T X ./ (W^T W H) with W held fixed and no penalty.
DenseMatrix extract_features(const DenseMatrix& w, const DenseMatrix& x_new, std::size_t iters,
                             std::uint64_t seed, double guard_eps = 1e-12);

/// 1-NN by Euclidean distance in coefficient space; ties go to the lowest
/// training column index.
std::vector<int> nearest_neighbor(const FeatureSet& train, const DenseMatrix& test_features);

/// Fraction of positions where predicted == truth.
double recognition_rate(const std::vector<int>& predicted, const std::vector<int>& truth);

} // namespace nmfz
