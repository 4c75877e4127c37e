#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <numeric>

#include "nmfz/dataset.hpp"
#include "nmfz/features.hpp"
#include "nmfz/io.hpp"
#include "test_helpers.hpp"

using nmfz::GrayImage;
using nmfz::LabeledDataset;
using nmfz::TrainTestSplit;

TEST_CASE("read_pgm: minimal ASCII case") {
    const GrayImage img = nmfz::read_pgm("P2 2 2 255 0 128 255 64");
    CHECK(img.width == 2);
    CHECK(img.height == 2);
    CHECK(img.maxval == 255);
    CHECK(img.pixels == std::vector<int>{0, 128, 255, 64});
}

TEST_CASE("read_pgm: header comments are skipped") {
    const GrayImage img = nmfz::read_pgm("P2\n# a comment line\n2 2\n# another\n255\n0 128 255 64");
    CHECK(img.pixels == std::vector<int>{0, 128, 255, 64});

    const GrayImage bin = nmfz::read_pgm(std::string("P5\n# made by a scanner\n2 2\n255\n") +
                                         std::string("\x00\x80\xff\x40", 4));
    CHECK(bin.pixels == std::vector<int>{0, 128, 255, 64});
}

TEST_CASE("read_pgm: P2 and P5 round trips agree") {
    GrayImage img;
    img.width = 3;
    img.height = 2;
    img.maxval = 200;
    img.pixels = {0, 10, 20, 100, 150, 200};

    const GrayImage p2 = nmfz::read_pgm(testutil::encode_pgm_p2(img));
    const GrayImage p5 = nmfz::read_pgm(testutil::encode_pgm_p5(img));
    CHECK(p2.pixels == img.pixels);
    CHECK(p5.pixels == img.pixels);
    CHECK(p2.maxval == img.maxval);
    CHECK(p5.width == img.width);
    CHECK(p5.height == img.height);
}

TEST_CASE("read_pgm: defects are rejected by name") {
    CHECK_THROWS_WITH_AS(nmfz::read_pgm("P6 1 1 255 x"), doctest::Contains("magic"),
                         std::invalid_argument);
    CHECK_THROWS_WITH_AS(nmfz::read_pgm("P2 2 2 300 0 0 0 0"), doctest::Contains("maxval"),
                         std::invalid_argument);
    CHECK_THROWS_WITH_AS(nmfz::read_pgm("P2 2 2 255 0 0 0"), doctest::Contains("truncated"),
                         std::invalid_argument);
    CHECK_THROWS_WITH_AS(nmfz::read_pgm(std::string("P5 2 2 255 ") + std::string(3, 'a')),
                         doctest::Contains("truncated"), std::invalid_argument);
    CHECK_THROWS_AS(nmfz::read_pgm("P2 2 2 100 0 0 0 101"), std::invalid_argument);
}

TEST_CASE("downscale") {
    GrayImage constant;
    constant.width = 8;
    constant.height = 8;
    constant.maxval = 255;
    constant.pixels.assign(64, 8);
    const GrayImage down = nmfz::downscale(constant, 4);
    CHECK(down.width == 2);
    CHECK(down.height == 2);
    CHECK(down.pixels == std::vector<int>(4, 8));

    GrayImage img;
    img.width = 4;
    img.height = 4;
    img.maxval = 255;
    img.pixels.resize(16);
    std::iota(img.pixels.begin(), img.pixels.end(), 0);
    CHECK(nmfz::downscale(img, 1).pixels == img.pixels);
    // mean 7.5 rounds half-up to 8
    CHECK(nmfz::downscale(img, 4).pixels == std::vector<int>{8});

    CHECK_THROWS_AS(nmfz::downscale(img, 3), std::invalid_argument);
}

TEST_CASE("downscale preserves the value range") {
    GrayImage img;
    img.width = 12;
    img.height = 8;
    img.maxval = 255;
    img.pixels.resize(96);
    for (std::size_t i = 0; i < img.pixels.size(); ++i) {
        img.pixels[i] = static_cast<int>((i * 37 + 11) % 256);
    }
    const int in_min = *std::min_element(img.pixels.begin(), img.pixels.end());
    const int in_max = *std::max_element(img.pixels.begin(), img.pixels.end());
    for (int factor : {2, 4}) {
        const GrayImage down = nmfz::downscale(img, factor);
        for (int v : down.pixels) {
            CHECK(v >= in_min);
            CHECK(v <= in_max);
        }
    }
}

TEST_CASE("load_orl on a generated tree") {
    testutil::TempDir tmp("orl");
    testutil::write_fake_orl_tree(tmp.path());

    const LabeledDataset ds = nmfz::load_orl(tmp.path(), 4);
    CHECK(ds.x.rows() == 644);
    CHECK(ds.x.cols() == 400);
    CHECK(ds.image_height == 28);
    CHECK(ds.image_width == 23);
    CHECK(nmfz::min_entry(ds.x) >= 0.0);
    CHECK(nmfz::max_entry(ds.x) <= 1.0);

    std::vector<int> labels = ds.labels;
    std::sort(labels.begin(), labels.end());
    labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
    CHECK(labels.size() == 40);
    for (int label : labels) {
        CHECK(std::count(ds.labels.begin(), ds.labels.end(), label) == 10);
    }

    // the recognition-protocol split: 5 per subject -> 200 train, 200 test
    const TrainTestSplit split = nmfz::random_split(ds, 5, 7);
    CHECK(split.train_cols.size() == 200);
    CHECK(split.test_cols.size() == 200);

    // a missing image is reported by path
    std::filesystem::remove(tmp.path() / "s7" / "3.pgm");
    CHECK_THROWS_WITH_AS(nmfz::load_orl(tmp.path(), 4), doctest::Contains("s7"),
                         std::runtime_error);
}

TEST_CASE("load_orl rejects wrong image dimensions") {
    testutil::TempDir tmp("orl_dims");
    testutil::write_fake_orl_tree(tmp.path());
    GrayImage wrong;
    wrong.width = 92;
    wrong.height = 56;
    wrong.maxval = 255;
    wrong.pixels.assign(92 * 56, 1);
    nmfz::write_text_file(tmp.path() / "s2" / "5.pgm", testutil::encode_pgm_p5(wrong));
    CHECK_THROWS_WITH_AS(nmfz::load_orl(tmp.path(), 4), doctest::Contains("92x56"),
                         std::runtime_error);
}

TEST_CASE("random_split") {
    const LabeledDataset ds = nmfz::synthetic_parts(20, 10, 4, 0.05, 1);

    const TrainTestSplit split = nmfz::random_split(ds, 5, 99);
    CHECK(split.train_cols.size() == 20);
    CHECK(split.test_cols.size() == 20);

    // partition of 0..n-1
    std::vector<std::size_t> all = split.train_cols;
    all.insert(all.end(), split.test_cols.begin(), split.test_cols.end());
    std::sort(all.begin(), all.end());
    for (std::size_t i = 0; i < all.size(); ++i) CHECK(all[i] == i);

    // per-class train counts
    for (int cls = 1; cls <= 4; ++cls) {
        const auto in_class = [&](std::size_t col) { return ds.labels[col] == cls; };
        CHECK(std::count_if(split.train_cols.begin(), split.train_cols.end(), in_class) == 5);
    }

    CHECK(nmfz::random_split(ds, 5, 99).train_cols == split.train_cols);
    CHECK(nmfz::random_split(ds, 5, 100).train_cols != split.train_cols);

    // boundary: leave exactly one test column per class
    const TrainTestSplit tight = nmfz::random_split(ds, 9, 5);
    CHECK(tight.test_cols.size() == 4);
    CHECK_THROWS_AS(nmfz::random_split(ds, 10, 5), std::invalid_argument);
}

TEST_CASE("synthetic_parts") {
    const LabeledDataset ds = nmfz::synthetic_parts(50, 10, 5, 0.05, 7);
    CHECK(ds.x.rows() == 50);
    CHECK(ds.x.cols() == 50);
    CHECK(ds.labels.size() == 50);
    CHECK(nmfz::min_entry(ds.x) >= 0.0);
    CHECK(nmfz::max_entry(ds.x) <= 1.0);

    const LabeledDataset again = nmfz::synthetic_parts(50, 10, 5, 0.05, 7);
    CHECK(again.x == ds.x);

    // noise-free classes have disjoint dominant support
    const LabeledDataset clean = nmfz::synthetic_parts(20, 3, 2, 0.0, 8);
    for (std::size_t j = 0; j < 3; ++j) {
        for (std::size_t r = 10; r < 20; ++r) CHECK(clean.x(r, j) == 0.0);
    }
    for (std::size_t j = 3; j < 6; ++j) {
        for (std::size_t r = 0; r < 10; ++r) CHECK(clean.x(r, j) == 0.0);
    }

    CHECK_THROWS_AS(nmfz::synthetic_parts(50, 10, 1, 0.0, 0), std::invalid_argument);
    CHECK_THROWS_AS(nmfz::synthetic_parts(3, 10, 5, 0.0, 0), std::invalid_argument);
}

TEST_CASE("synthetic_parts: raw-pixel 1-NN sanity oracle") {
    const LabeledDataset ds = nmfz::synthetic_parts(50, 10, 5, 0.05, 11);
    const TrainTestSplit split = nmfz::random_split(ds, 5, 12);

    std::vector<int> train_labels, test_labels;
    for (std::size_t c : split.train_cols) train_labels.push_back(ds.labels[c]);
    for (std::size_t c : split.test_cols) test_labels.push_back(ds.labels[c]);

    const auto predicted = nmfz::nearest_neighbor(
        {nmfz::select_columns(ds.x, split.train_cols), train_labels},
        nmfz::select_columns(ds.x, split.test_cols));
    CHECK(nmfz::recognition_rate(predicted, test_labels) > 0.9);
}
