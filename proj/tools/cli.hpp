#pragma once

#include <iosfwd>

namespace dms::cli {

/// Exit codes of the dms tool.
enum ExitCode : int {
    kOk = 0,
    kMismatch = 1,
    kUsage = 2,
    kCapExceeded = 3,
};

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace dms::cli
