#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace walshlab::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitUsage = 2;

/// Runs the walshlab command line (args excludes the program name). Reports go
/// to `out` (or to files under --outdir); diagnostics and usage go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace walshlab::cli
