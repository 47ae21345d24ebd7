#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace hadamard::cli {

/// Runs one command line (without the program name). The result JSON goes to
/// `out` (or the --output file), diagnostics to `err`. Returns 0 on success,
/// 2 for invalid input, 3 when a resource cap is exceeded.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hadamard::cli
