#pragma once

#include <ostream>

namespace ckgf::cli {

enum ExitCode : int { ok = 0, predicate_false = 2, precondition_violated = 3, input_error = 4 };

/// Parses arguments, runs one command and writes its report to `out`
/// (or to --out). Diagnostics go to `err`. Returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ckgf::cli
