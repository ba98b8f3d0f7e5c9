#pragma once

#include <iosfwd>

namespace qprep::cli {

/// argv-style entry point shared by the `qprep` binary and the tests.
/// Machine output (JSON reports, CSV tables) goes to `out`; human messages
/// (errors, timing) go to `err`. Returns the process exit code: 0 success,
/// 2 malformed input or schema violation, 3 compile failure, 4 verification
/// failure.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace qprep::cli
