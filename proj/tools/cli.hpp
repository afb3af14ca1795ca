#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace confsphere::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailed = 1;
inline constexpr int kExitInvalid = 2;

/// Runs one subcommand. args excludes the program name. The JSON report goes
/// to --out when given (summary on out), otherwise to out (summary on err).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace confsphere::cli
