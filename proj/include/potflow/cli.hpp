#pragma once

#include <iosfwd>

namespace potflow {

/// Parses argv and runs one subcommand. Returns 0 on success, 1 on a
/// validation error (message on `err`), 2 on a numeric failure (diagnostic
/// JSON on `err`).
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace potflow
