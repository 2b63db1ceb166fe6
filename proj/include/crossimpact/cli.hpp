#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace crossimpact::cli {

/// Exit codes of run().
enum ExitCode : int { kOk = 0, kValidationError = 1, kComputationError = 2 };

/// Runs one subcommand. args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace crossimpact::cli
