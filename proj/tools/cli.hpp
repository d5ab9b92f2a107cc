#pragma once

#include <iostream>

namespace qht::cli {

/// Runs the qht command line. Returns 0 on success, 1 for malformed input or
/// failed validation, 2 for numerical failures (a JSON diagnostic is written
/// to `err`).
int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr);

}  // namespace qht::cli
