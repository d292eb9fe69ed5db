#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mms::cli {

enum ExitCode : int { kOk = 0, kRuntimeError = 1, kUsageError = 2 };

// Entry point behind the mms_bench executable. args excludes the program
// name, e.g. {"solve", "--instance", "bqp2500.txt"}.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mms::cli
