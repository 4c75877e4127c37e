#pragma once

#include <string>
#include <vector>

namespace nmfz::cli {

/// Entry point behind the nmfz binary; also callable from tests. Returns
/// the process exit status: 0 on success, nonzero on any error (diagnostics
/// go to stderr, data to files or stdout).
int run(const std::vector<std::string>& args);
int run(int argc, const char* const* argv);

} // namespace nmfz::cli
