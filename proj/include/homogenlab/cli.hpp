#pragma once

#include <ostream>

namespace homogenlab {

/// Entry point of the `homogenlab` tool. Returns the process exit code:
/// 0 on success, 1 on rejected input (one "error: <code>: <message>" line on
/// `err`), 2 when a solver stopped without converging.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace homogenlab
