#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "riskyish/error.hpp"

namespace riskyish {

/// 0 success, 1 usage, 2 validation (and unknown ids), 3 I/O, 4 insufficient data.
int exit_code(ErrorKind kind);

/// Entry point behind the `riskyish` binary. `args` excludes the program name.
/// Machine output goes to `out`, diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

} // namespace riskyish
