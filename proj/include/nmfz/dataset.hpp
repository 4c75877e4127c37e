#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "nmfz/matrix.hpp"

namespace nmfz {

struct GrayImage {
    int width = 0;
    int height = 0;
    int maxval = 255;
    std::vector<int> pixels; // row-major, each in [0, maxval]
};

/// Pixel matrix (one normalized image per column, entries in [0, 1]) plus a
/// class label per column.
struct LabeledDataset {
    DenseMatrix x; // p x n
    std::vector<int> labels; // size n
    int image_height = 0;
    int image_width = 0; // image_height * image_width == p
};

struct TrainTestSplit {
    std::vector<std::size_t> train_cols;
    std::vector<std::size_t> test_cols;
};

/// Decodes a PGM byte stream, binary (P5) or ASCII (P2), maxval <= 255.
/// Header `#` comment lines are skipped; for P5 the pixel bytes start
/// immediately after the single whitespace byte that follows maxval.
GrayImage read_pgm(std::string_view bytes);
GrayImage read_pgm_file(const std::filesystem::path& path);

/// Block-mean downscale by an integer factor; each output pixel is the mean
/// of its factor x factor source block, rounded half-up.
GrayImage downscale(const GrayImage& img, int factor);

/// Loads the AT&T ORL tree root/s{1..40}/{1..10}.pgm (92x112 images),
/// downscales by `factor`, normalizes pixels into [0, 1] and flattens each
/// image row-major into one column. Labels are subject numbers 1..40.
LabeledDataset load_orl(const std::filesystem::path& root, int factor);

/// Per class, `per_class_train` columns chosen uniformly without
/// replacement; the rest become test columns. Deterministic per seed.
TrainTestSplit random_split(const LabeledDataset& ds, std::size_t per_class_train,
                            std::uint64_t seed);

/// Desk-scale labeled data: each class owns a disjoint block of floor(p /
/// classes) rows with prototype values uniform on [0.5, 1); each sample is
/// its prototype scaled by a per-sample gain uniform on [0.8, 1.2] plus
/// per-pixel background noise uniform on [0, noise], clamped to [0, 1].
/// With noise = 0 and no entry hitting the clamp, the matrix has rank
/// exactly `classes`.
LabeledDataset synthetic_parts(std::size_t p, std::size_t n_per_class, std::size_t classes,
                               double noise, std::uint64_t seed);

} // namespace nmfz
