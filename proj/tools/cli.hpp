#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "fgdyn/errors.hpp"

namespace fgdyn::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInternal = 1;
inline constexpr int kExitUsage = 64;

/// One exit status per error code, all in [2, 63].
int exit_code(ErrorCode code);

/// Runs one subcommand; args[0] is the program name. Reports go to out,
/// diagnostics to err.
int cli_run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fgdyn::cli
