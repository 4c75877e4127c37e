#include "nmfz/cli.hpp"

int main(int argc, char** argv) { return nmfz::cli::run(argc, argv); }
