#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "nmfz/matrix.hpp"

namespace nmfz {

/// Shortest decimal representation that round-trips the exact double.
std::string format_number(double v);

/// Fixed-point with the given number of decimals (used for rates).
std::string format_fixed(double v, int decimals);

/// One comma-separated row per matrix row, values via format_number.
/// Lines from `comments` are written first, each prefixed with "# ".
void write_matrix_csv(const DenseMatrix& m, const std::filesystem::path& path,
                      const std::vector<std::string>& comments = {});

void write_text_file(const std::filesystem::path& path, const std::string& content);
std::string read_text_file(const std::filesystem::path& path);

} // namespace nmfz
