#include "nmfz/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "nmfz/rng.hpp"

namespace nmfz {

namespace {

[[noreturn]] void pgm_fail(const std::string& why) {
    throw std::invalid_argument("read_pgm: " + why);
}

// Skips whitespace and '#' comment lines between header tokens.
void skip_header_space(std::string_view bytes, std::size_t& pos) {
    while (pos < bytes.size()) {
        const char c = bytes[pos];
        if (c == '#') {
            while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
        } else if (std::isspace(static_cast<unsigned char>(c))) {
            ++pos;
        } else {
            break;
        }
    }
}

int read_header_int(std::string_view bytes, std::size_t& pos, const char* what) {
    skip_header_space(bytes, pos);
    if (pos >= bytes.size() || !std::isdigit(static_cast<unsigned char>(bytes[pos]))) {
        pgm_fail(std::string("expected ") + what + " in header");
    }
    long value = 0;
    while (pos < bytes.size() && std::isdigit(static_cast<unsigned char>(bytes[pos]))) {
        value = value * 10 + (bytes[pos] - '0');
        if (value > 1000000) pgm_fail(std::string(what) + " out of range");
        ++pos;
    }
    return static_cast<int>(value);
}

} // namespace

GrayImage read_pgm(std::string_view bytes) {
    std::size_t pos = 0;
    skip_header_space(bytes, pos);
    if (pos + 2 > bytes.size() || bytes[pos] != 'P' ||
        (bytes[pos + 1] != '2' && bytes[pos + 1] != '5')) {
        pgm_fail("bad magic, expected P2 or P5");
    }
    const bool binary = bytes[pos + 1] == '5';
    pos += 2;

    GrayImage img;
    img.width = read_header_int(bytes, pos, "width");
    img.height = read_header_int(bytes, pos, "height");
    img.maxval = read_header_int(bytes, pos, "maxval");
    if (img.width <= 0 || img.height <= 0) pgm_fail("dimensions must be positive");
    if (img.maxval <= 0) pgm_fail("maxval must be positive");
    if (img.maxval > 255) pgm_fail("maxval " + std::to_string(img.maxval) + " > 255 unsupported");

    const std::size_t count = static_cast<std::size_t>(img.width) * img.height;
    img.pixels.reserve(count);

    if (binary) {
        // Exactly one whitespace byte separates maxval from the raster.
        if (pos >= bytes.size() || !std::isspace(static_cast<unsigned char>(bytes[pos]))) {
            pgm_fail("missing whitespace after maxval");
        }
        ++pos;
        if (bytes.size() - pos < count) {
            pgm_fail("truncated pixel data, need " + std::to_string(count) + " bytes, have " +
                     std::to_string(bytes.size() - pos));
        }
        for (std::size_t i = 0; i < count; ++i) {
            const int v = static_cast<unsigned char>(bytes[pos + i]);
            if (v > img.maxval) pgm_fail("pixel value " + std::to_string(v) + " exceeds maxval");
            img.pixels.push_back(v);
        }
    } else {
        for (std::size_t i = 0; i < count; ++i) {
            skip_header_space(bytes, pos);
            if (pos >= bytes.size()) pgm_fail("truncated pixel data after " + std::to_string(i) +
                                              " of " + std::to_string(count) + " values");
            const int v = read_header_int(bytes, pos, "pixel");
            if (v > img.maxval) pgm_fail("pixel value " + std::to_string(v) + " exceeds maxval");
            img.pixels.push_back(v);
        }
    }
    return img;
}

GrayImage read_pgm_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return read_pgm(buf.str());
    } catch (const std::exception& e) {
        throw std::runtime_error(path.string() + ": " + e.what());
    }
}

GrayImage downscale(const GrayImage& img, int factor) {
    if (factor <= 0) throw std::invalid_argument("downscale: factor must be positive");
    if (img.width % factor != 0 || img.height % factor != 0) {
        throw std::invalid_argument("downscale: " + std::to_string(img.width) + "x" +
                                    std::to_string(img.height) + " not divisible by factor " +
                                    std::to_string(factor));
    }
    GrayImage out;
    out.width = img.width / factor;
    out.height = img.height / factor;
    out.maxval = img.maxval;
    out.pixels.resize(static_cast<std::size_t>(out.width) * out.height);
    const long block = static_cast<long>(factor) * factor;
    for (int r = 0; r < out.height; ++r) {
        for (int c = 0; c < out.width; ++c) {
            long sum = 0;
            for (int dr = 0; dr < factor; ++dr) {
                const int* row = img.pixels.data() +
                                 static_cast<std::size_t>(r * factor + dr) * img.width;
                for (int dc = 0; dc < factor; ++dc) sum += row[c * factor + dc];
            }
            // round-half-up of sum/block in integer arithmetic
            out.pixels[static_cast<std::size_t>(r) * out.width + c] =
                static_cast<int>((2 * sum + block) / (2 * block));
        }
    }
    return out;
}

LabeledDataset load_orl(const std::filesystem::path& root, int factor) {
    constexpr int kSubjects = 40;
    constexpr int kPerSubject = 10;
    constexpr int kWidth = 92;
    constexpr int kHeight = 112;
    if (factor <= 0 || kWidth % factor != 0 || kHeight % factor != 0) {
        throw std::invalid_argument("load_orl: factor " + std::to_string(factor) +
                                    " does not divide 92x112");
    }
    const int out_w = kWidth / factor;
    const int out_h = kHeight / factor;
    const std::size_t p = static_cast<std::size_t>(out_w) * out_h;

    LabeledDataset ds;
    ds.image_width = out_w;
    ds.image_height = out_h;
    ds.x = DenseMatrix(p, static_cast<std::size_t>(kSubjects) * kPerSubject);
    ds.labels.resize(static_cast<std::size_t>(kSubjects) * kPerSubject);

    for (int s = 1; s <= kSubjects; ++s) {
        for (int i = 1; i <= kPerSubject; ++i) {
            const std::filesystem::path path =
                root / ("s" + std::to_string(s)) / (std::to_string(i) + ".pgm");
            if (!std::filesystem::exists(path)) {
                throw std::runtime_error("load_orl: missing image " + path.string());
            }
            GrayImage img = read_pgm_file(path);
            if (img.width != kWidth || img.height != kHeight) {
                throw std::runtime_error("load_orl: " + path.string() + " is " +
                                         std::to_string(img.width) + "x" +
                                         std::to_string(img.height) + ", expected 92x112");
            }
            img = downscale(img, factor);
            const std::size_t col = static_cast<std::size_t>(s - 1) * kPerSubject + (i - 1);
            for (std::size_t k = 0; k < p; ++k) {
                ds.x(k, col) = static_cast<double>(img.pixels[k]) / img.maxval;
            }
            ds.labels[col] = s;
        }
    }
    return ds;
}

TrainTestSplit random_split(const LabeledDataset& ds, std::size_t per_class_train,
                            std::uint64_t seed) {
    if (per_class_train == 0) {
        throw std::invalid_argument("random_split: per_class_train must be >= 1");
    }
    // Column indices per class, classes visited in ascending label order.
    std::vector<int> classes = ds.labels;
    std::sort(classes.begin(), classes.end());
    classes.erase(std::unique(classes.begin(), classes.end()), classes.end());

    Rng rng(seed);
    TrainTestSplit split;
    for (int cls : classes) {
        std::vector<std::size_t> members;
        for (std::size_t j = 0; j < ds.labels.size(); ++j) {
            if (ds.labels[j] == cls) members.push_back(j);
        }
        if (members.size() < per_class_train + 1) {
            throw std::invalid_argument("random_split: class " + std::to_string(cls) + " has " +
                                        std::to_string(members.size()) +
                                        " members, need at least " +
                                        std::to_string(per_class_train + 1));
        }
        // Partial Fisher-Yates: the first per_class_train slots become train.
        for (std::size_t k = 0; k < per_class_train; ++k) {
            const std::size_t j = k + rng.below(members.size() - k);
            std::swap(members[k], members[j]);
        }
        std::vector<std::size_t> train(members.begin(), members.begin() + per_class_train);
        std::vector<std::size_t> test(members.begin() + per_class_train, members.end());
        std::sort(train.begin(), train.end());
        std::sort(test.begin(), test.end());
        split.train_cols.insert(split.train_cols.end(), train.begin(), train.end());
        split.test_cols.insert(split.test_cols.end(), test.begin(), test.end());
    }
    return split;
}

LabeledDataset synthetic_parts(std::size_t p, std::size_t n_per_class, std::size_t classes,
                               double noise, std::uint64_t seed) {
    if (classes < 2) throw std::invalid_argument("synthetic_parts: need at least 2 classes");
    if (p < classes) throw std::invalid_argument("synthetic_parts: p must be >= classes");
    if (n_per_class == 0) throw std::invalid_argument("synthetic_parts: n_per_class must be >= 1");
    if (!(noise >= 0.0)) throw std::invalid_argument("synthetic_parts: noise must be >= 0");

    const std::size_t block = p / classes;
    Rng rng(seed);

    std::vector<std::vector<double>> prototypes(classes, std::vector<double>(p, 0.0));
    for (std::size_t c = 0; c < classes; ++c) {
        for (std::size_t r = c * block; r < (c + 1) * block; ++r) {
            prototypes[c][r] = rng.uniform(0.5, 1.0);
        }
    }

    LabeledDataset ds;
    ds.x = DenseMatrix(p, classes * n_per_class);
    ds.labels.resize(classes * n_per_class);
    ds.image_height = static_cast<int>(p);
    ds.image_width = 1;

    for (std::size_t c = 0; c < classes; ++c) {
        for (std::size_t s = 0; s < n_per_class; ++s) {
            const std::size_t col = c * n_per_class + s;
            const double gain = rng.uniform(0.8, 1.2);
            for (std::size_t r = 0; r < p; ++r) {
                double v = prototypes[c][r] * gain;
                if (noise > 0.0) v += rng.uniform(0.0, noise);
                ds.x(r, col) = std::clamp(v, 0.0, 1.0);
            }
            ds.labels[col] = static_cast<int>(c) + 1;
        }
    }
    return ds;
}

} // namespace nmfz
