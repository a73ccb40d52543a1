#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace torushopf {

// One CLI invocation, in-process. args excludes the program name. Returns
// the process exit code: 0 success, 2 bad configuration, 3 numerical
// non-convergence, 4 violated analytical precondition.
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err);

}  // namespace torushopf
